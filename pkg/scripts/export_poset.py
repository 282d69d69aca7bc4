#!/usr/bin/env python3
"""Export the arrow-algebra artifacts: class listing, Hasse DOT, table CSV,
and example meta-DAGs over a small node range.

Render with graphviz, e.g.:  dot -Tpng hasse.dot -o hasse.png
"""

import argparse
from pathlib import Path

from dyadgen.arrows import (
    Arrow,
    build_hasse,
    class_label,
    composition_table_csv,
    derive_composition_table,
    enumerate_closed_classes,
    hasse_dot,
    meta_dag_dot,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="poset_out")
    ap.add_argument("--nodes", type=int, default=5, help="meta-DAG examples size")
    args = ap.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    table = derive_composition_table()
    classes = enumerate_closed_classes(table)
    poset = build_hasse(classes)

    (outdir / "hasse.dot").write_text(hasse_dot(poset, table))
    (outdir / "composition_table.csv").write_text(composition_table_csv(table))
    for kinds, stem in [
        (frozenset({Arrow.HUB, Arrow.PATH}), "metadag_hub_path"),
        (frozenset({Arrow.HUB, Arrow.PATH, Arrow.OLD}), "metadag_hub_path_old"),
        (frozenset({Arrow.HUB, Arrow.NEW}), "metadag_hub_new"),
    ]:
        (outdir / f"{stem}_n{args.nodes}.dot").write_text(
            meta_dag_dot(kinds, args.nodes)
        )

    print(f"wrote {outdir}/hasse.dot, composition_table.csv, meta-DAG examples")
    for cls in classes:
        print(f"  {class_label(cls, table)}")


if __name__ == "__main__":
    main()
