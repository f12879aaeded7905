"""dual fs | dual primes | dual freeba | dual roundtrip"""

from app.commands import read_text
from app.core.duality import (
    FinDistLattice,
    FinPoset,
    count_antichains,
    final_segments,
    find_isomorphism,
    free_boolean_algebra,
    prime_filters,
)
from app.models.schemas import CONSTRUCTION, EXHAUSTIVE, Report
from app.parsers.documents import parse_poset_file


def register(subparsers):
    group = subparsers.add_parser("dual", help="finite posets, lattices and Boolean algebras")
    commands = group.add_subparsers(dest="command", required=True)

    fs = commands.add_parser("fs", help="lattice of final segments of a poset")
    fs.add_argument("--poset", required=True, help="poset file")
    fs.set_defaults(handler=dual_fs)

    primes = commands.add_parser("primes", help="prime filters of a distributive lattice")
    primes.add_argument("--lattice", required=True, help="poset file holding the lattice order")
    primes.set_defaults(handler=dual_primes)

    freeba = commands.add_parser("freeba", help="free Boolean algebra over a poset")
    freeba.add_argument("--poset", required=True)
    freeba.set_defaults(handler=dual_freeba)

    roundtrip = commands.add_parser("roundtrip", help="check prime_filters(fs(P)) is isomorphic to P")
    roundtrip.add_argument("--poset", required=True)
    roundtrip.set_defaults(handler=dual_roundtrip)


def _poset(path: str) -> FinPoset:
    return parse_poset_file(read_text(path))


def dual_fs(args) -> Report:
    p = _poset(args.poset)
    lattice = final_segments(p)
    report = Report(command="dual fs", inputs={"poset": args.poset})
    report.lines.append(f"fs(P): {lattice.size} elements ({count_antichains(p)} antichains)")
    report.lines.extend(lattice.table_text().splitlines())
    report.results = {"lattice": lattice.to_dict()}
    report.add_provenance("fs(P)", CONSTRUCTION, "up-closed subsets under reversed inclusion")
    return report


def dual_primes(args) -> Report:
    order = _poset(args.lattice)
    lattice = FinDistLattice(order.labels, order.leq)
    primes = prime_filters(lattice)
    report = Report(command="dual primes", inputs={"lattice": args.lattice})
    report.lines.extend(str(primes).splitlines())
    report.results = {"primes": primes.to_dict()}
    report.add_provenance("prime filters", CONSTRUCTION, "principal filters of join-irreducibles")
    return report


def dual_freeba(args) -> Report:
    p = _poset(args.poset)
    free = free_boolean_algebra(p)
    report = Report(command="dual freeba", inputs={"poset": args.poset})
    segments = [final_segments(p).labels[k] for k in range(len(free.segments))]
    report.lines.append(f"F(P) = 2^fs(P): {free.size} elements, atoms {', '.join(segments)}")
    for x, mask in enumerate(free.embedding):
        members = [segments[k] for k in range(len(segments)) if (mask >> k) & 1]
        report.lines.append(f"i({p.labels[x]}) = {{{', '.join(members)}}}")
    embedded = free.is_order_embedding()
    report.lines.append(f"order embedding: {'yes' if embedded else 'no'}")
    report.results = {"size": free.size, "atoms": segments, "order_embedding": embedded}
    report.add_provenance("F(P)", CONSTRUCTION, "powerset of final segments")
    if not embedded:
        report.mismatch("i_P is not an order embedding")
    return report


def dual_roundtrip(args) -> Report:
    p = _poset(args.poset)
    back = prime_filters(final_segments(p))
    mapping = find_isomorphism(p, back)
    report = Report(command="dual roundtrip", inputs={"poset": args.poset})
    if mapping is None:
        report.lines.append("round trip fails: prime_filters(fs(P)) is not isomorphic to P")
        report.mismatch("no isomorphism found")
    else:
        report.lines.append("prime_filters(fs(P)) ≅ P")
        report.lines.extend(f"  {p.labels[i]} -> {back.labels[j]}" for i, j in sorted(mapping.items()))
    report.results = {"isomorphic": mapping is not None}
    report.add_provenance("isomorphism", EXHAUSTIVE, "backtracking search")
    return report
