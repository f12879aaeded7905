"""construct xc | construct separate | construct family | construct sums"""

from app.config import config
from app.core.construct import (
    ClubSpec,
    build_XC,
    club_of_partial_sums,
    family_generator,
    partial_sums,
    rank_spectrum,
    separate,
)
from app.core.ordinal import to_str
from app.core.spaceterm import XC, invariant_vector, rank
from app.models.schemas import CONSTRUCTION, ORACLE, SYMBOLIC, Report
from app.parsers.expressions import parse_ordinal, parse_ordinal_list, parse_set, parse_term
from app.utils.error_handlers import ParseError


def register(subparsers):
    group = subparsers.add_parser("construct", help="club constructions and separating families")
    commands = group.add_subparsers(dest="command", required=True)

    xc = commands.add_parser("xc", help="X(C) over a club")
    source = xc.add_mutually_exclusive_group(required=True)
    source.add_argument("--A", dest="a", help="generators of a partial-sum club, e.g. 'w,w^2'")
    source.add_argument("--club", help="set expression, e.g. 'club(w,w^2)'")
    xc.add_argument("--index", help="club index w*k (default w*|A|)")
    xc.add_argument("--schedule", help="cyclic generator positions, e.g. '0,1,1' (default 0..|A|-1)")
    xc.add_argument("--nu", help="limit ordinal ν (default DEFAULT_NU)")
    xc.set_defaults(handler=construct_xc)

    sep = commands.add_parser("separate", help="compare rank spectra of two generator sets")
    sep.add_argument("--A", dest="a", required=True, help="generators, e.g. 'w,w^2'")
    sep.add_argument("--B", dest="b", required=True)
    sep.add_argument("--nu")
    sep.add_argument("--index", help="club index w*k (default w*|A|)")
    sep.set_defaults(handler=construct_separate)

    family = commands.add_parser("family", help="vector sums over chosen index sets")
    family.add_argument("--terms", required=True, help="';'-separated space terms of equal rank")
    family.add_argument("--subsets", required=True, help="';'-separated index sets, e.g. '0,1;1,2'")
    family.add_argument("--kappa", default="w")
    family.set_defaults(handler=construct_family)

    sums = commands.add_parser("sums", help="first partial sums of a generator schedule")
    sums.add_argument("--A", dest="a", required=True)
    sums.add_argument("-n", type=int, default=8)
    sums.set_defaults(handler=construct_sums)


def _nu(args):
    return parse_ordinal(args.nu or config.default_nu, args.normalize)


def _schedule(text: str):
    try:
        return [int(i) for i in text.split(",") if i.strip()]
    except ValueError as e:
        raise ParseError(f"schedule {text!r} is not a list of naturals", text) from e


def _spec(text: str, args) -> ClubSpec:
    index = parse_ordinal(args.index, args.normalize) if getattr(args, "index", None) else None
    schedule = _schedule(args.schedule) if getattr(args, "schedule", None) else None
    return ClubSpec.with_index(parse_ordinal_list(text, args.normalize), index, schedule)


def construct_xc(args) -> Report:
    if args.a:
        club = club_of_partial_sums(_spec(args.a, args))
    elif args.index or args.schedule:
        raise ParseError("--index and --schedule need --A", args.club)
    else:
        club = parse_set(args.club, normalize=args.normalize)
    nu = _nu(args)
    term = XC(club, nu)
    lam = term.top
    region = build_XC(club.with_top(lam), lam, nu)
    symbolic = rank(term)
    measured = region.cb_rank_finite()
    spectrum = rank_spectrum(region, club.with_top(lam), nu)
    report = Report(command="construct xc", inputs={"club": str(club), "nu": to_str(nu)})
    report.lines.extend(str(region).splitlines())
    report.lines.append(f"rank: {to_str(symbolic)} (line/box union; oracle: {measured})")
    report.lines.append(f"spectrum: {spectrum.text()}")
    report.results = {
        "region": str(region),
        "rank": to_str(symbolic),
        "oracle_rank": str(measured),
        "spectrum": [to_str(v) for v in spectrum.spectrum],
    }
    report.add_provenance("region", CONSTRUCTION, "line over [0,Λ] plus fibers over the closed club")
    report.add_provenance("rank", SYMBOLIC, "max(rk[0,Λ], rk(C∪{Λ}) ⊕ rk[0,ν])")
    report.add_provenance("spectrum", ORACLE, "point ranks at isolated club points")
    if measured.known and measured.value != symbolic:
        report.mismatch(f"symbolic rank {to_str(symbolic)} vs oracle {measured}")
    if not spectrum.agreement:
        report.mismatch("predicted and measured spectra differ")
    return report


def construct_separate(args) -> Report:
    a, b = _spec(args.a, args), _spec(args.b, args)
    nu = _nu(args)
    result = separate(a, b, nu)
    report = Report(command="construct separate", inputs={"A": str(a), "B": str(b), "nu": to_str(nu)})
    report.lines.append(result.text())
    report.results = {
        "separated": result.separated,
        "left": [to_str(v) for v in result.left.spectrum],
        "right": [to_str(v) for v in result.right.spectrum],
    }
    report.add_provenance("spectra", ORACLE, "point ranks in X(C)")
    report.add_provenance("spectra", SYMBOLIC, "max(level of the club point, last exponent of ν)")
    for side, spectrum in (("A", result.left), ("B", result.right)):
        if not spectrum.agreement:
            report.mismatch(f"spectrum of {side}: predicted and measured ranks differ")
    if not result.separated:
        report.exit_status = max(report.exit_status, 1)
    return report


def construct_family(args) -> Report:
    ys = [parse_term(chunk.strip(), args.normalize) for chunk in args.terms.split(";") if chunk.strip()]
    subsets = []
    for chunk in args.subsets.split(";"):
        try:
            subsets.append([int(i) for i in chunk.split(",") if i.strip()])
        except ValueError as e:
            raise ParseError(f"index set {chunk!r} is not a list of naturals", args.subsets) from e
    kappa = parse_ordinal(args.kappa, args.normalize)
    members = family_generator(ys, subsets, kappa)
    report = Report(command="construct family", inputs={"terms": args.terms, "subsets": args.subsets, "kappa": to_str(kappa)})
    vectors = []
    for subset, member in zip(subsets, members):
        vector = invariant_vector(member)
        vectors.append(str(vector))
        report.lines.append(f"{sorted(set(subset))}: {member}  {vector}")
    distinct = len(set(vectors)) == len(vectors)
    report.lines.append(f"invariant vectors pairwise distinct: {'yes' if distinct else 'no'}")
    report.results = {"members": [str(m) for m in members], "vectors": vectors, "distinct": distinct}
    report.add_provenance("vectors", SYMBOLIC, "rank calculus with summand vectors")
    return report


def construct_sums(args) -> Report:
    spec = _spec(args.a, args)
    values = partial_sums(spec, args.n)
    report = Report(command="construct sums", inputs={"A": args.a, "n": str(args.n)})
    report.lines.extend(to_str(v) for v in values)
    report.results = {"partial_sums": [to_str(v) for v in values]}
    report.add_provenance("partial sums", SYMBOLIC, "ordinal addition along the schedule")
    return report
