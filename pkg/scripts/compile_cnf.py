#!/usr/bin/env python3
"""Compile a CNF formula into a Hamiltonian-cycle counting instance and check it.

Reads DIMACS from a file (or one of the built-in corpus formulas by index),
assembles the graph mod p, recounts Hamiltonian cycles with the
decomposition-driven dynamic program, and compares against the model count.

    python scripts/compile_cnf.py --corpus 4 --mod 5
    python scripts/compile_cnf.py formula.cnf --mod 3 --out formula.hcg
    python scripts/compile_cnf.py --corpus 2 --mod 3 --gamma 2
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from matchconn.cli import CNF_CORPUS
from matchconn.graphs import write_hcgraph, write_sidecar
from matchconn.hcount import count_hc_pathdp
from matchconn.reduction import assemble, count_sat, parse_dimacs


@dataclass
class CompileConfig:
    source: str          # file path or "corpus:<i>"
    mod: int = 5
    beta: int = 5
    gamma: int = 1
    out: str | None = None
    recount: bool = True


def load(cfg: CompileConfig):
    if cfg.source.startswith("corpus:"):
        i = int(cfg.source.split(":", 1)[1])
        name, cnf = CNF_CORPUS[i]
        return name, cnf
    text = Path(cfg.source).read_text()
    return cfg.source, parse_dimacs(text)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("cnf", nargs="?", help="DIMACS file")
    ap.add_argument("--corpus", type=int, help="use built-in formula by index instead")
    ap.add_argument("--mod", type=int, default=5)
    ap.add_argument("--beta", type=int, default=5)
    ap.add_argument("--gamma", type=int, default=1)
    ap.add_argument("--out", help="write the graph here (sidecar goes to OUT.json)")
    ap.add_argument("--no-recount", dest="recount", action="store_false")
    ns = ap.parse_args(argv)
    if (ns.cnf is None) == (ns.corpus is None):
        ap.error("give a DIMACS file or --corpus INDEX, not both")
    cfg = CompileConfig(
        source=ns.cnf if ns.cnf else f"corpus:{ns.corpus}",
        mod=ns.mod,
        beta=ns.beta,
        gamma=ns.gamma,
        out=ns.out,
        recount=ns.recount,
    )

    name, cnf = load(cfg)
    models = count_sat(cnf)
    t0 = time.perf_counter()
    out = assemble(cnf, cfg.mod, beta=cfg.beta, gamma=cfg.gamma)
    built = time.perf_counter() - t0

    print(f"formula: {name} ({cnf.num_vars} vars, {len(cnf.clauses)} clauses, {models} models)")
    if out.pad_vars:
        print(f"padded with {out.pad_vars} free variables (gamma={cfg.gamma})")
    print(
        f"graph: {len(out.graph.vertices)} vertices, {len(out.graph.edges)} edges,"
        f" width {out.width} <= {out.width_bound}, built in {built:.2f}s"
    )
    print(f"predicted residue {out.predicted} mod {cfg.mod}")

    if cfg.recount:
        t0 = time.perf_counter()
        res = count_hc_pathdp(out.graph, out.decomposition, modulus=cfg.mod)
        counted = time.perf_counter() - t0
        agree = res.value == out.predicted
        print(f"recounted {res.value} mod {cfg.mod} in {counted:.2f}s -> "
              + ("agree" if agree else "DISAGREE"))
        if not agree:
            return 1

    if cfg.out:
        write_hcgraph(cfg.out, out.graph, out.decomposition)
        write_sidecar(cfg.out + ".json", out.sidecar())
        print(f"wrote {cfg.out} and {cfg.out}.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
