"""Problem and run-config file formats.

Problem files (``.prob``) are line-based structured text::

    # comment
    [domain]
    kind = interval            # periodic | halfspace | interval
    n = 2
    tau = 1.0
    lengths = 1.0 6.283185307179586

    [system]
    N = 2
    # coefficient term lines:  a <j> <k> <alpha> <x-exponents> <t-exp> <value>
    # alpha and x-exponents are comma-separated integers in parentheses of
    # length n; value is a Python complex literal (no spaces).  Repeated
    # lines with the same (j, k, alpha) accumulate polynomial terms.
    a 1 1 (2,0) (0,0) 0 1
    a 1 1 (0,2) (0,0) 0 1

    [boundary]
    l = 0 0
    b 1 1 (0,0) (0,0) 0 1

    [phi]                      # optional weight parameter
    kind = log-multiscale      # constant | log-multiscale | tabulated
    theta = 1.0 -1.0
    r0 = 7.38905609893065
    # tabulated kind instead uses:  nodes = 1:1 10:1.2 100:1.4 ...

Component indices in files are 1-based, matching the usual notation; they
are converted to zero-based indices internally.

Run configs (``.cfg``) add ``[run]`` (problem path relative to the config
file, stage list, seed, tol), ``[regularity]`` (the order ``s``), an
optional ``[phi]`` section, and one optional section per stage; see the
dataclasses below for the recognized keys and defaults.  A config may also
inline the problem sections directly instead of naming a file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SpecFormatError
from .polynomials import Poly
from .symbols import DomainDescriptor, ProblemSpec
from .weights import DEFAULT_SPLICE_RADIUS, SlowlyVaryingFn

STAGES = ("parabolicity", "compatibility", "interpolation", "sweep")

_SECTION_RE = re.compile(r"^\[([a-zA-Z0-9_-]+)\]$")


def parse_sections(text: str, path=None) -> dict:
    """Split structured text into ``{section: {"pairs": .., "terms": ..}}``."""
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1).lower()
            sections.setdefault(current, {"pairs": {}, "terms": []})
            continue
        if current is None:
            raise SpecFormatError("content before any [section]", path, lineno)
        if line[0] in "ab" and len(line) > 1 and line[1].isspace():
            sections[current]["terms"].append((lineno, line.split()))
            continue
        if "=" not in line:
            raise SpecFormatError(f"expected 'key = value', got {line!r}",
                                  path, lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        sections[current]["pairs"][key.lower()] = (value, lineno)
    return sections


def _pair(sections, section, key, default=None, required=False, path=None):
    sec = sections.get(section, {"pairs": {}})
    if key in sec["pairs"]:
        return sec["pairs"][key][0]
    if required:
        raise SpecFormatError(f"missing key {key!r} in [{section}]", path)
    return default


def _as_int(value, path, what):
    try:
        return int(value)
    except ValueError as exc:
        raise SpecFormatError(f"{what}: expected integer, got {value!r}",
                              path) from exc


def _as_float(value, path, what):
    try:
        return float(value)
    except ValueError as exc:
        raise SpecFormatError(f"{what}: expected number, got {value!r}",
                              path) from exc


def _as_complex(value, path, what):
    try:
        return complex(value.replace(" ", ""))
    except ValueError as exc:
        raise SpecFormatError(f"{what}: expected complex literal, got "
                              f"{value!r}", path) from exc


def _as_index_tuple(token, n, path, lineno, what):
    if not (token.startswith("(") and token.endswith(")")):
        raise SpecFormatError(f"{what}: expected (..) tuple, got {token!r}",
                              path, lineno)
    parts = [p for p in token[1:-1].split(",") if p != ""]
    out = tuple(_as_int(p, path, what) for p in parts)
    if len(out) != n or any(v < 0 for v in out):
        raise SpecFormatError(f"{what}: need {n} nonnegative integers",
                              path, lineno)
    return out


# ----------------------------------------------------------------------
# the weight parameter


def parse_phi(sections, path=None) -> SlowlyVaryingFn:
    if "phi" not in sections:
        return SlowlyVaryingFn.constant()
    kind = _pair(sections, "phi", "kind", default="constant", path=path)
    if kind == "constant":
        value = _as_float(_pair(sections, "phi", "value", default="1.0",
                                path=path), path, "phi value")
        return SlowlyVaryingFn.constant(value)
    if kind == "log-multiscale":
        theta_raw = _pair(sections, "phi", "theta", required=True, path=path)
        theta = tuple(_as_float(v, path, "phi theta") for v in theta_raw.split())
        r0 = _as_float(_pair(sections, "phi", "r0",
                             default=str(DEFAULT_SPLICE_RADIUS), path=path),
                       path, "phi r0")
        return SlowlyVaryingFn.log_multiscale(*theta, splice_radius=r0)
    if kind == "tabulated":
        nodes_raw = _pair(sections, "phi", "nodes", required=True, path=path)
        radii, values = [], []
        for item in nodes_raw.split():
            if ":" not in item:
                raise SpecFormatError(f"phi nodes: expected r:value, got "
                                      f"{item!r}", path)
            r, v = item.split(":", 1)
            radii.append(_as_float(r, path, "phi node radius"))
            values.append(_as_float(v, path, "phi node value"))
        return SlowlyVaryingFn.tabulated(radii, values)
    raise SpecFormatError(f"unknown phi kind {kind!r}", path)


# ----------------------------------------------------------------------
# problem files


def problem_from_sections(sections, path=None) -> ProblemSpec:
    for needed in ("domain", "system", "boundary"):
        if needed not in sections:
            raise SpecFormatError(f"missing [{needed}] section", path)
    kind = _pair(sections, "domain", "kind", required=True, path=path)
    n = _as_int(_pair(sections, "domain", "n", required=True, path=path),
                path, "domain n")
    tau = _as_float(_pair(sections, "domain", "tau", required=True, path=path),
                    path, "domain tau")
    lengths_raw = _pair(sections, "domain", "lengths", required=True, path=path)
    lengths = tuple(_as_float(v, path, "domain lengths")
                    for v in lengths_raw.split())
    if len(lengths) != n:
        raise SpecFormatError(f"domain lengths: need {n} entries", path)
    try:
        domain = DomainDescriptor(kind, lengths)
    except ValueError as exc:
        raise SpecFormatError(str(exc), path) from exc

    N = _as_int(_pair(sections, "system", "n", required=True, path=path),
                path, "system N")
    l_raw = _pair(sections, "boundary", "l", required=True, path=path)
    l = tuple(_as_int(v, path, "boundary l") for v in l_raw.split())

    a_coeffs = _collect_terms(sections["system"]["terms"], "a", N, n, path)
    b_coeffs = _collect_terms(sections["boundary"]["terms"], "b", N, n, path)
    has_complex = any(c.imag != 0 for table in (a_coeffs, b_coeffs)
                      for terms in table.values()
                      for c in terms.values())
    try:
        return ProblemSpec(
            N=N, n=n, tau=tau, l=l,
            a_coeffs={k: Poly(n, v) for k, v in a_coeffs.items()},
            b_coeffs={k: Poly(n, v) for k, v in b_coeffs.items()},
            domain=domain, complex_coefficients=has_complex)
    except ValueError as exc:
        raise SpecFormatError(str(exc), path) from exc


def _collect_terms(term_lines, tag, N, n, path):
    coeffs: dict = {}
    for lineno, tokens in term_lines:
        if tokens[0] != tag:
            raise SpecFormatError(f"expected {tag!r} term line", path, lineno)
        if len(tokens) != 7:
            raise SpecFormatError(
                f"term line needs '{tag} j k (alpha) (x-exp) t-exp value'",
                path, lineno)
        j = _as_int(tokens[1], path, "component j") - 1
        k = _as_int(tokens[2], path, "component k") - 1
        if not (0 <= j < N and 0 <= k < N):
            raise SpecFormatError(f"component indices out of 1..{N}",
                                  path, lineno)
        alpha = _as_index_tuple(tokens[3], n, path, lineno, "alpha")
        xexp = _as_index_tuple(tokens[4], n, path, lineno, "x-exponents")
        texp = _as_int(tokens[5], path, "t-exponent")
        value = _as_complex(tokens[6], path, "coefficient value")
        terms = coeffs.setdefault((j, k, alpha), {})
        key = (xexp, texp)
        terms[key] = terms.get(key, 0j) + value
    return coeffs


def load_problem(path) -> ProblemSpec:
    path = Path(path)
    return problem_from_sections(parse_sections(path.read_text(), path), path)


# ----------------------------------------------------------------------
# run configs


@dataclass
class ParabolicityStageConfig:
    directions: int = 32
    space_time: int = 8
    boundary_samples: int = 200
    axis_tol: float = 1e-8
    sv_tol: float = 1e-8
    delta1: float | None = None
    seed: int = 11


@dataclass
class CompatibilityStageConfig:
    degree: int = 4
    seed: int = 7
    residual_tol: float = 1e-10
    perturb_g1: float = 0.0
    s: float | None = None
    quad_nodes: int = 8


@dataclass
class InterpolationStageConfig:
    s0: float | None = None
    s1: float | None = None
    grid_points: int = 200
    r_max: float = 1e8
    identity_tol: float = 1e-12
    eps: tuple[float, ...] = (0.1, 0.2, 0.4)


@dataclass
class SweepStageConfig:
    cutoffs: tuple[int, ...] = (8, 16, 32)
    samples: int = 30
    ratio_bound: float = 20.0
    fixed_mode: tuple[int, ...] = (1, 1, 1)
    fixed_mode_tol: float = 1e-10


@dataclass
class RunConfig:
    problem: ProblemSpec
    phi: SlowlyVaryingFn
    s: float = 3.0
    stages: tuple[str, ...] = STAGES
    seed: int = 0
    tol: float = 1e-8
    out: str | None = None
    source: str | None = None
    parabolicity: ParabolicityStageConfig = field(
        default_factory=ParabolicityStageConfig)
    compatibility: CompatibilityStageConfig = field(
        default_factory=CompatibilityStageConfig)
    interpolation: InterpolationStageConfig = field(
        default_factory=InterpolationStageConfig)
    sweep: SweepStageConfig = field(default_factory=SweepStageConfig)


def load_config(path) -> RunConfig:
    path = Path(path)
    sections = parse_sections(path.read_text(), path)
    if "run" not in sections:
        raise SpecFormatError("missing [run] section", path)

    if "domain" in sections:
        problem = problem_from_sections(sections, path)
        source = path.name
    else:
        prob_rel = _pair(sections, "run", "problem", required=True, path=path)
        prob_path = (path.parent / prob_rel).resolve()
        problem = load_problem(prob_path)
        source = Path(prob_rel).name
    phi = parse_phi(sections, path)

    stages_raw = _pair(sections, "run", "stages",
                       default=" ".join(STAGES), path=path)
    stages = tuple(stages_raw.split())
    for st in stages:
        if st not in STAGES:
            raise SpecFormatError(f"unknown stage {st!r}", path)

    cfg = RunConfig(
        problem=problem,
        phi=phi,
        s=_as_float(_pair(sections, "regularity", "s", default="3.0",
                          path=path), path, "regularity s"),
        stages=stages,
        seed=_as_int(_pair(sections, "run", "seed", default="0", path=path),
                     path, "run seed"),
        tol=_as_float(_pair(sections, "run", "tol", default="1e-8",
                            path=path), path, "run tol"),
        out=_pair(sections, "run", "out", default=None, path=path),
        source=source,
    )
    _fill_stage(cfg.parabolicity, sections, "parabolicity", path)
    _fill_stage(cfg.compatibility, sections, "compatibility", path)
    _fill_stage(cfg.interpolation, sections, "interpolation", path)
    _fill_stage(cfg.sweep, sections, "sweep", path)
    return cfg


def _fill_stage(stage_cfg, sections, name, path):
    pairs = sections.get(name, {"pairs": {}})["pairs"]
    for key, (value, lineno) in pairs.items():
        attr = key.replace("-", "_")
        if not hasattr(stage_cfg, attr):
            raise SpecFormatError(f"unknown key {key!r} in [{name}]",
                                  path, lineno)
        current = getattr(stage_cfg, attr)
        if attr in ("cutoffs", "fixed_mode"):
            setattr(stage_cfg, attr,
                    tuple(_as_int(v, path, key) for v in value.split()))
        elif attr == "eps":
            setattr(stage_cfg, attr,
                    tuple(_as_float(v, path, key) for v in value.split()))
        elif isinstance(current, bool):
            setattr(stage_cfg, attr, value.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(stage_cfg, attr, _as_int(value, path, key))
        else:
            setattr(stage_cfg, attr, _as_float(value, path, key))


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture file (problem or config)."""
    return Path(__file__).resolve().parent / "fixtures" / name
