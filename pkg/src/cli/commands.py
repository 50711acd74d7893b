"""
Commands - The geocube command line

Subcommands read a complex from a file, standard input or the built-in
corpus, and write deterministic UTF-8 text to standard output or -o.
Library errors become one-line diagnostics with their exit code.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from cli.formatting import complex_summary, dual_lines, euler_lines, homology_lines
from config import ConfigManager
from core.chain_algebra import Chain, Cochain, betti_numbers, cohomology, fundamental_class, homology
from core.cubical_complex import CubicalComplex
from core.errors import GeocubeError
from core.generators import circle, cube_boundary, fuzz, path, point, standard_cube, torus_grid
from core.products_duality import (
    cap,
    cross,
    cup,
    dual_basis,
    intersect_check,
    kunneth_check,
    pd_check,
    uct_check,
)
from core.sign_suite import ALL_PROPERTIES, run_sign_suite
from core.subdivision import subdivide
from utils.corpus import corpus_load
from utils.documents import (
    chain_to_document,
    complex_to_document,
    document_to_chain,
    load_complex,
    parse_chain,
    write_chain,
    write_complex,
)
from utils.logger import setup_logger

logger = logging.getLogger(__name__)

COEFF_CHOICES = ("z", "z2")


class CommandResult:
    """Output text and exit status of one command"""

    def __init__(self, text: str = "", status: int = 0):
        self.text = text
        self.status = status


def read_bytes(source: str) -> bytes:
    if source == "-":
        return sys.stdin.buffer.read()
    return Path(source).read_bytes()


def load_source(source: str, corpus: Optional[str] = None) -> CubicalComplex:
    """Complex from --corpus, or from a file path ("-" is standard input)"""
    if corpus:
        return corpus_load(corpus)
    return load_complex(read_bytes(source))


def load_operand(text: str) -> CubicalComplex:
    """A file path if one exists, otherwise a corpus name"""
    if text != "-" and not Path(text).exists():
        return corpus_load(text)
    return load_source(text)


def load_element(path: str, complex_: CubicalComplex, coeff: str):
    return document_to_chain(parse_chain(read_bytes(path)), complex_, coeff)


def _expect(element, kind, label: str):
    if not isinstance(element, kind):
        raise ValueError(f"{label} must be a {kind.__name__.lower()} document")
    return element


def _degrees(args, complex_: CubicalComplex) -> List[int]:
    return [args.deg] if args.deg is not None else list(range(complex_.dim + 1))


# Handlers


def cmd_validate(args) -> CommandResult:
    return CommandResult(complex_summary(load_source(args.source, args.corpus)))


GENERATORS: Dict[str, Callable] = {
    "point": lambda a: point(),
    "path": lambda a: path(a.k),
    "circle": lambda a: circle(a.k),
    "torus": lambda a: torus_grid(a.p, a.q),
    "cube": lambda a: standard_cube(a.n),
    "cube-boundary": lambda a: cube_boundary(a.n),
    "klein": lambda a: corpus_load("klein"),
    "fuzz": lambda a: fuzz(a.seed, a.size),
}


def cmd_gen(args) -> CommandResult:
    if args.kind == "fuzz" and args.seed is None:
        raise ValueError("gen fuzz needs --seed")
    complex_ = GENERATORS[args.kind](args)
    return CommandResult(write_complex(complex_to_document(complex_)).decode("utf-8"))


def cmd_homology(args) -> CommandResult:
    complex_ = load_source(args.source, args.corpus)
    results = [homology(complex_, k, args.coeff) for k in _degrees(args, complex_)]
    return CommandResult(homology_lines(results, args.generators))


def cmd_cohomology(args) -> CommandResult:
    complex_ = load_source(args.source, args.corpus)
    results = [cohomology(complex_, k, args.coeff) for k in _degrees(args, complex_)]
    return CommandResult(homology_lines(results, args.generators))


def cmd_euler(args) -> CommandResult:
    complex_ = load_source(args.source, args.corpus)
    return CommandResult(euler_lines(complex_, betti_numbers(complex_)))


def cmd_fclass(args) -> CommandResult:
    complex_ = load_source(args.source, args.corpus)
    return CommandResult(write_chain(chain_to_document(fundamental_class(complex_, args.coeff))).decode("utf-8"))


def cmd_cup(args) -> CommandResult:
    complex_ = load_source(args.source, args.corpus)
    alpha = _expect(load_element(args.alpha, complex_, args.coeff), Cochain, "--alpha")
    beta = _expect(load_element(args.beta, complex_, args.coeff), Cochain, "--beta")
    return CommandResult(write_chain(chain_to_document(cup(alpha, beta))).decode("utf-8"))


def cmd_cap(args) -> CommandResult:
    complex_ = load_source(args.source, args.corpus)
    alpha = _expect(load_element(args.alpha, complex_, args.coeff), Cochain, "--alpha")
    if args.chain:
        chain = _expect(load_element(args.chain, complex_, args.coeff), Chain, "--chain")
    else:
        chain = fundamental_class(complex_, args.coeff)
    return CommandResult(write_chain(chain_to_document(cap(alpha, chain))).decode("utf-8"))


def cmd_cross(args) -> CommandResult:
    left, right = load_operand(args.left), load_operand(args.right)
    first = _expect(load_element(args.left_chain, left, args.coeff), Chain, "--left-chain")
    second = _expect(load_element(args.right_chain, right, args.coeff), Chain, "--right-chain")
    result = cross(first, second)
    if args.product_out:
        Path(args.product_out).write_bytes(write_complex(complex_to_document(result.complex)))
    return CommandResult(write_chain(chain_to_document(result)).decode("utf-8"))


def cmd_subdivide(args) -> CommandResult:
    sd = subdivide(load_source(args.source, args.corpus))
    return CommandResult(write_complex(complex_to_document(sd.complex)).decode("utf-8"))


def cmd_dual(args) -> CommandResult:
    complex_ = load_source(args.source, args.corpus)
    entries = []
    for degree in _degrees(args, complex_):
        entries += dual_basis(complex_, degree, args.coeff)
    return CommandResult(dual_lines(entries))


def cmd_intersect_check(args) -> CommandResult:
    report = intersect_check(load_source(args.source, args.corpus), args.coeff)
    return CommandResult(report.render(), 0 if report.passed else 1)


def cmd_pd_check(args) -> CommandResult:
    report = pd_check(load_source(args.source, args.corpus), args.coeff)
    return CommandResult(report.render(), 0 if report.passed else 1)


def cmd_uct_check(args) -> CommandResult:
    complex_ = load_source(args.source, args.corpus)
    reports = [uct_check(complex_, k) for k in _degrees(args, complex_)]
    text = "\n".join(report.render() for report in reports)
    return CommandResult(text, 0 if all(r.passed for r in reports) else 1)


def cmd_kunneth(args) -> CommandResult:
    report = kunneth_check(load_operand(args.left), load_operand(args.right))
    return CommandResult(report.render(), 0 if report.passed else 1)


def cmd_sign_suite(args) -> CommandResult:
    workers = args.workers if args.workers is not None else ConfigManager().load_suite_workers()
    report = run_sign_suite(
        args.seed,
        args.instances,
        args.max_dim,
        extended=args.extended,
        properties=args.property or None,
        workers=workers,
    )
    return CommandResult(report.render(), 0 if report.all_passed else 1)


# Parser


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("-o", "--output", metavar="FILE", help="Write the result to FILE instead of stdout")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Log INFO, or DEBUG when repeated")


def _add_source(parser: argparse.ArgumentParser):
    parser.add_argument("source", nargs="?", default="-", help="Complex document (default: stdin)")
    parser.add_argument("--corpus", metavar="NAME", help="Use a built-in complex instead of a document")


def _add_coeff(parser: argparse.ArgumentParser):
    parser.add_argument("--coeff", choices=COEFF_CHOICES, default="z", help="Coefficients: z or z2")


def _add_degree(parser: argparse.ArgumentParser, help_text: str):
    parser.add_argument("--deg", type=int, help=help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geocube",
        description="Cubical homology, products, duality and co-orientation sign checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  geocube gen torus --p 4 --q 4 | geocube homology --deg 1
  geocube gen cube-boundary --n 3 | geocube pd-check
  geocube sign-suite --seed 42 --instances 1000 --max-dim 5
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: str, handler, help_text: str, source: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        if source:
            _add_source(p)
        _add_common(p)
        p.set_defaults(handler=handler)
        return p

    command("validate", cmd_validate, "Validate a complex and print its face counts")

    p = command("gen", cmd_gen, "Write a built-in complex as a document", source=False)
    p.add_argument("kind", choices=sorted(GENERATORS))
    p.add_argument("--p", type=int, default=4, help="Torus width")
    p.add_argument("--q", type=int, default=4, help="Torus height")
    p.add_argument("--n", type=int, default=2, help="Cube dimension")
    p.add_argument("--k", type=int, default=4, help="Path length or circle size")
    p.add_argument("--seed", type=int, help="Seed for fuzz (required)")
    p.add_argument("--size", type=int, default=3, help="Grid side length for fuzz")

    for name, handler, text in (
        ("homology", cmd_homology, "Homology groups H_k"),
        ("cohomology", cmd_cohomology, "Cohomology groups H^k"),
    ):
        p = command(name, handler, text)
        _add_degree(p, "Only this degree (default: all)")
        _add_coeff(p)
        p.add_argument("--generators", action="store_true", help="Print generators as chain documents")

    command("euler", cmd_euler, "Euler characteristic from faces and from Betti numbers")

    p = command("fclass", cmd_fclass, "Fundamental class of a closed oriented complex")
    _add_coeff(p)

    p = command("cup", cmd_cup, "Cup product of two cochain documents")
    p.add_argument("--alpha", required=True, metavar="FILE")
    p.add_argument("--beta", required=True, metavar="FILE")
    _add_coeff(p)

    p = command("cap", cmd_cap, "Cap product of a cochain with a chain (default: the fundamental class)")
    p.add_argument("--alpha", required=True, metavar="FILE")
    p.add_argument("--chain", metavar="FILE")
    _add_coeff(p)

    p = command("cross", cmd_cross, "Cross product of chains on two complexes", source=False)
    p.add_argument("left", help="Complex document or corpus name")
    p.add_argument("right", help="Complex document or corpus name")
    p.add_argument("--left-chain", required=True, metavar="FILE")
    p.add_argument("--right-chain", required=True, metavar="FILE")
    p.add_argument("--product-out", metavar="FILE", help="Also write the product complex")
    _add_coeff(p)

    command("subdivide", cmd_subdivide, "Central subdivision as a complex document")

    p = command("dual", cmd_dual, "Dual blocks psi(F^*) of every face")
    _add_degree(p, "Only faces of this degree (default: all)")
    _add_coeff(p)

    p = command("intersect-check", cmd_intersect_check, "Check that psi is a chain map inverted by I")
    _add_coeff(p)

    p = command("pd-check", cmd_pd_check, "Check Poincare duality by capping with the fundamental class")
    _add_coeff(p)

    p = command("uct-check", cmd_uct_check, "Check the universal coefficient sequence over Z")
    _add_degree(p, "Only this degree (default: all)")

    p = command("kunneth", cmd_kunneth, "Compare the homology of a product with the Kunneth formula", source=False)
    p.add_argument("left", help="Complex document or corpus name")
    p.add_argument("right", help="Complex document or corpus name")

    p = command("sign-suite", cmd_sign_suite, "Randomized checks of the orientation sign rules", source=False)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("--extended", action="store_true", help="Also run the extended properties")
    p.add_argument("--property", action="append", choices=list(ALL_PROPERTIES), help="Run only this property")
    p.add_argument("--workers", type=int, help="Worker processes (default: from settings)")

    return parser


def configure_logging(verbose: int):
    config = ConfigManager()
    if verbose:
        level = logging.DEBUG if verbose > 1 else logging.INFO
    else:
        level = logging.getLevelNamesMapping()[config.load_log_level()]
    setup_logger("geocube", log_dir=config.load_log_dir(), level=level, to_file=config.load_log_to_file())


def emit(text: str, output: Optional[str]):
    data = text.encode("utf-8")
    if output:
        Path(output).write_bytes(data)
        return
    buffer = getattr(sys.stdout, "buffer", None)
    if buffer is None:
        sys.stdout.write(text)
        return
    sys.stdout.flush()
    buffer.write(data)
    buffer.flush()


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run one command and return the exit status

    Returns:
        0 on success, 1 on a failed check or invalid input, 2 on usage errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbose)
    logger.info(f"Running {args.command}")
    try:
        result = args.handler(args)
    except GeocubeError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    emit(result.text, args.output)
    return result.status
