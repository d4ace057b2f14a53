"""Command-line front end: column profiles, classical/quantum comparison, limits.

Examples::

    gluedwalk profile --n 500 --times 100,250,400
    gluedwalk compare --n 2..10 --format json
    gluedwalk limiting --graph ring.txt --mode quantum
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .classical import (
    classical_limiting_distribution,
    column_chain,
    column_occupation,
    glued_trees_column_chain,
    evolve_classical,
    jump_chain_curve,
)
from .columns import (
    FULL_SPACE_MAX_DEPTH,
    column_basis,
    leading_edge,
    reduced_hamiltonian,
)
from .graph import (
    GraphFormatError,
    build_glued_trees,
    generator_matrix,
    glued_trees_vertex_count,
    read_graph_file,
)
from .quantum import evolve_quantum, limiting_distribution_spectral
from .spectral import SpectralDecomposition

BOUND_SLACK = 1e-12


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: list[int] | None = None
    graph: str | None = None
    gamma: float = 1.0
    times: list[float] | None = None
    steps: int = 10_000
    mode: str | None = None
    space: str | None = None
    start: int = 0
    format: str = "csv"
    out: str | None = None
    threshold: float = 1e-4

    def validate(self):
        if (self.n is None) == (self.graph is None):
            raise ConfigError("give exactly one of --n or --graph")
        if not self.gamma > 0:
            raise ConfigError("--gamma must be positive")
        if self.times is not None and any(t < 0 for t in self.times):
            raise ConfigError("--times must be nonnegative")
        if self.steps < 0:
            raise ConfigError("--steps must be nonnegative")
        if self.graph is not None and self.space == "reduced":
            raise ConfigError("--space reduced needs glued-trees input (--n)")
        if self.n is not None:
            if not self.n:
                raise ConfigError("--n range is empty")
            if min(self.n) < 1:
                raise ConfigError("--n values must be >= 1")
            if self.command != "compare" and len(self.n) != 1:
                raise ConfigError(f"{self.command} takes a single --n")
            if self.space == "full" and max(self.n) > FULL_SPACE_MAX_DEPTH:
                raise ConfigError(f"--space full is capped at n={FULL_SPACE_MAX_DEPTH}")
        if self.threshold < 0:
            raise ConfigError("--threshold must be nonnegative")
        return self


def fmt(x) -> str:
    return format(float(x), ".17g")


def parse_n(text: str) -> list[int]:
    """``"4"``, ``"2,3,5"`` or an inclusive range ``"2..10"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --n value {text!r}") from None


def parse_times(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --times value {text!r}") from None


def _metadata(cfg: RunConfig) -> dict:
    return {"tool": "gluedwalk", "version": __version__, "config": asdict(cfg)}


def _provenance(cfg: RunConfig) -> str:
    keys = ("n", "graph", "gamma", "mode", "space", "start")
    parts = []
    for k in keys:
        val = getattr(cfg, k)
        if isinstance(val, list):
            val = ",".join(map(str, val))
        if val is not None:
            parts.append(f"{k}={val}")
    return f"# gluedwalk {__version__} {cfg.command} " + " ".join(parts)


def _start_vector(dim: int, start: int) -> np.ndarray:
    if not 0 <= start < dim:
        raise ConfigError(f"--start {start} out of range 0..{dim - 1}")
    p = np.zeros(dim)
    p[start] = 1.0
    return p


# -- profile ---------------------------------------------------------------

def run_profile(cfg: RunConfig) -> dict:
    if not cfg.times:
        raise ConfigError("profile needs --times")
    mode = cfg.mode or "quantum"
    times = np.array(cfg.times)
    if cfg.graph is not None:
        g = read_graph_file(cfg.graph)
        m = generator_matrix(g, cfg.gamma)
        spec = SpectralDecomposition.from_matrix(m)
        p0 = _start_vector(g.vertex_count, cfg.start)
        if mode == "quantum":
            probs = np.abs(evolve_quantum(spec, p0.astype(complex), times)) ** 2
        else:
            probs = evolve_classical(spec, p0, times)
        key, edges = "index", [None] * len(times)
    else:
        n = cfg.n[0]
        space = cfg.space or "reduced"
        if space == "reduced":
            if mode == "quantum":
                probs = np.abs(reduced_hamiltonian(n, cfg.gamma).evolve(times)) ** 2
            else:
                probs = column_occupation(_chain(n, cfg.gamma), times)
        else:
            layout = build_glued_trees(n)
            basis = column_basis(layout)
            m = generator_matrix(layout.graph, cfg.gamma)
            spec = SpectralDecomposition.from_matrix(m)
            p0 = _start_vector(layout.graph.vertex_count, layout.left_root)
            if mode == "quantum":
                vertex = np.abs(evolve_quantum(spec, p0.astype(complex), times)) ** 2
            else:
                vertex = evolve_classical(spec, p0, times)
            probs = basis.marginals(vertex)
        key = "column"
        edges = [leading_edge(row, cfg.threshold) for row in probs]
    profiles = [
        {"t": float(t), "leading_edge": edge,
         "rows": [{key: i, "probability": float(p)} for i, p in enumerate(row)]}
        for t, edge, row in zip(times, edges, probs)
    ]
    return {"key": key, "profiles": profiles}


def _chain(n: int, gamma: float):
    if n > FULL_SPACE_MAX_DEPTH:
        return glued_trees_column_chain(n, gamma)
    return column_chain(build_glued_trees(n), gamma)


def render_profile(cfg: RunConfig, result: dict) -> str:
    if cfg.format == "json":
        return _json(cfg, {"profiles": result["profiles"]})
    lines = [_provenance(cfg)]
    for prof in result["profiles"]:
        edge = prof["leading_edge"]
        lines.append(f"# t={fmt(prof['t'])} leading_edge={'' if edge is None else edge}")
        lines.append(f"{result['key']},probability")
        lines.extend(f"{r[result['key']]},{fmt(r['probability'])}" for r in prof["rows"])
    return "\n".join(lines) + "\n"


# -- compare ---------------------------------------------------------------

COMPARE_HEADER = ("n", "classical_sup", "classical_pi_root", "quantum_chi_root", "bound")


def run_compare(cfg: RunConfig) -> dict:
    if cfg.graph is not None:
        raise ConfigError("compare works on the glued trees; use --n")
    rows, violations = [], []
    for n in cfg.n:
        sup = float(jump_chain_curve(_chain(n, cfg.gamma), 0, cfg.steps).max())
        chi = limiting_distribution_spectral(reduced_hamiltonian(n, cfg.gamma), 0)[-1]
        bound = 1.0 / (2 * n + 1)
        rows.append({"n": n, "classical_sup": sup,
                     "classical_pi_root": 1.0 / glued_trees_vertex_count(n),
                     "quantum_chi_root": float(chi), "bound": bound})
        if n >= 2 and not sup < 2.0**-n:
            violations.append(f"n={n}: classical_sup {sup!r} >= 2^-{n}")
        if not chi >= bound - BOUND_SLACK:
            violations.append(f"n={n}: quantum_chi_root {chi!r} < 1/(2n+1)")
    return {"rows": rows, "violations": violations}


def render_compare(cfg: RunConfig, result: dict) -> str:
    if cfg.format == "json":
        return _json(cfg, result)
    lines = [",".join(COMPARE_HEADER)]
    for r in result["rows"]:
        lines.append(",".join([str(r["n"])] + [fmt(r[k]) for k in COMPARE_HEADER[1:]]))
    return "\n".join(lines) + "\n"


# -- limiting --------------------------------------------------------------

def run_limiting(cfg: RunConfig) -> dict:
    dists = {}
    modes = [cfg.mode] if cfg.mode else ["classical", "quantum"]
    if cfg.graph is not None:
        g = read_graph_file(cfg.graph)
        if "classical" in modes:
            dists["classical"] = classical_limiting_distribution(g)
        if "quantum" in modes:
            if not 0 <= cfg.start < g.vertex_count:
                raise ConfigError(f"--start {cfg.start} out of range")
            dists["quantum"] = limiting_distribution_spectral(generator_matrix(g, cfg.gamma), cfg.start)
        key = "index"
    else:
        n = cfg.n[0]
        space = cfg.space or "full"
        if space == "full":
            layout = build_glued_trees(n)
            if "classical" in modes:
                dists["classical"] = classical_limiting_distribution(layout.graph)
            if "quantum" in modes:
                dists["quantum"] = limiting_distribution_spectral(
                    generator_matrix(layout.graph, cfg.gamma), layout.left_root)
            key = "index"
        else:
            if "classical" in modes:
                dists["classical"] = _chain(n, cfg.gamma).stationary
            if "quantum" in modes:
                dists["quantum"] = limiting_distribution_spectral(reduced_hamiltonian(n, cfg.gamma), 0)
            key = "column"
    return {"key": key, "distributions": {k: [float(x) for x in v] for k, v in dists.items()}}


def render_limiting(cfg: RunConfig, result: dict) -> str:
    if cfg.format == "json":
        return _json(cfg, result)
    key = result["key"]
    dists = result["distributions"]
    names = list(dists)
    header = [key] + (["probability"] if len(names) == 1 else names)
    lines = [_provenance(cfg), ",".join(header)]
    for i, vals in enumerate(zip(*(dists[k] for k in names))):
        lines.append(",".join([str(i)] + [fmt(x) for x in vals]))
    return "\n".join(lines) + "\n"


def _json(cfg: RunConfig, payload: dict) -> str:
    return json.dumps({"metadata": _metadata(cfg), **payload}, indent=2) + "\n"


COMMANDS = {
    "profile": (run_profile, render_profile),
    "compare": (run_compare, render_compare),
    "limiting": (run_limiting, render_limiting),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gluedwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "profile": "column (or vertex) probabilities at given times",
        "compare": "classical vs quantum right-root metrics over a range of n",
        "limiting": "classical and quantum limiting distributions",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--n", type=parse_n, help="depth of G_n; compare accepts 2..10 or 2,4,6")
        p.add_argument("--graph", metavar="FILE", help="edge-list graph file")
        p.add_argument("--gamma", type=float, default=1.0)
        p.add_argument("--times", type=parse_times, help="comma-separated times")
        p.add_argument("--steps", type=int, default=10_000, help="jump-chain steps (compare)")
        p.add_argument("--mode", choices=("classical", "quantum"))
        p.add_argument("--space", choices=("full", "reduced"),
                       help="default: reduced for profile/compare, full for limiting")
        p.add_argument("--start", type=int, default=0, help="start vertex for --graph input")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")
        p.add_argument("--threshold", type=float, default=1e-4,
                       help="leading-edge probability threshold")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    run, render = COMMANDS[cfg.command]
    try:
        cfg.validate()
        result = run(cfg)
    except (ConfigError, GraphFormatError, OSError, ValueError) as exc:
        print(f"gluedwalk {cfg.command}: error: {exc}", file=sys.stderr)
        return 2
    text = render(cfg, result)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for msg in result.get("violations", ()):
        print(f"bound violated: {msg}", file=sys.stderr)
    return 1 if result.get("violations") else 0


if __name__ == "__main__":
    raise SystemExit(main())
