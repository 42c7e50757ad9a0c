"""quadrank command line.

Exit codes: 0 success / certified, 1 certificate refused, 2 input or spec
error, 3 brute-force budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import gen
from .certify import (
    build_sigma,
    canonical_decomposition,
    extension_certify,
    sample_crosscheck,
    structural_certificate,
)
from .errors import (
    BudgetExceeded,
    CertificateRefused,
    DiagonalNotPrimeForm,
    QuadrankError,
)
from .exactla import FieldMatrix, RationalMatrix
from .matrixio import emit_matrix, parse_matrix, write_matrix
from .numfield import approximate, sqrt_of_integer, PrimeBasis
from .oracle import DEFAULT_BUDGET, bounds_report, nonneg_factorization_F, sqrt_rank_bruteforce

EXIT_OK, EXIT_REFUSED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(QuadrankError):
    pass


def load_input(arg: str):
    """(matrix, spec or None) from a spec string or a matrix file path."""
    if gen.looks_like_spec(arg):
        spec = gen.parse_spec(arg)
        return gen.generate(spec), spec
    path = Path(arg)
    if not path.exists():
        raise InputError(f"{arg!r} is neither a matrix spec nor an existing file")
    return parse_matrix(path.read_text()), None


def as_rational(M) -> RationalMatrix:
    if isinstance(M, RationalMatrix):
        return M
    if isinstance(M, FieldMatrix) and M.is_rational():
        return M.to_rational()
    raise InputError("this command needs a rational matrix")


def describe(spec, M) -> str:
    if spec is None:
        return f"matrix: N={M.rows}x{M.cols}"
    if spec.family == "P":
        return f"P_{spec.n}: N={M.rows} p={gen.nearest_prime(spec.n)}"
    if spec.family == "fawziQ":
        return f"fawziQ({','.join(map(str, spec.aux))}): N={M.rows}"
    return f"{spec.family}_{spec.n}: N={M.rows}"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _kv(pairs) -> str:
    return "\n".join(f"{k}: {v}" for k, v in pairs)


def cmd_gen(args) -> int:
    spec = gen.parse_spec(args.spec)
    M = gen.generate(spec)
    if args.output:
        write_matrix(M, args.output)
        print(describe(spec, M))
    else:
        sys.stdout.write(emit_matrix(M))
        print(describe(spec, M), file=sys.stderr)
    return EXIT_OK


def _refusal_name(exc: CertificateRefused) -> str:
    name = type(exc).__name__
    if isinstance(exc, DiagonalNotPrimeForm) and type(exc) is not DiagonalNotPrimeForm:
        name = f"DiagonalNotPrimeForm ({name})"
    return name


def cmd_certify(args) -> int:
    M, spec = load_input(args.input)
    W = as_rational(M)
    try:
        cert = structural_certificate(W)
    except CertificateRefused as exc:
        pairs = [("certified", "false"), ("failed_check", exc.check), ("error", _refusal_name(exc)), ("detail", str(exc))]
        if args.format == "kv":
            _emit(_kv(pairs), args.output)
        else:
            _emit(f"REFUSED {_refusal_name(exc)}: {exc}\nfailed check: {exc.check}", args.output)
        return EXIT_REFUSED
    extra = []
    if spec is not None and spec.family == "P":
        b = gen.size_bound_check(spec.n)
        extra.append(("exp_lower", f"3^({spec.n}/3-1) >= {b.exp_lower}"))
        extra.append(("exp_comparison", "bound >= 3^(n/3-1): " + ("yes" if b.exp_holds else "no")))
    if args.digits:
        rp = sqrt_of_integer(PrimeBasis((cert.p,)), cert.p)
        extra.append(("sqrt_p", approximate(rp, args.digits)))
    if args.crosscheck:
        ranks = sample_crosscheck(W, cert.p, args.crosscheck, seed=args.seed)
        extra.append(("crosscheck_samples", str(len(ranks))))
        extra.append(("crosscheck_min_rank", str(min(ranks))))
        extra.append(("crosscheck_ok", "yes" if min(ranks) >= cert.bound else "NO"))
    if args.format == "kv":
        text = cert.to_kv() + ("\n" + _kv(extra) if extra else "")
    else:
        head, last = cert.to_text().rsplit("\n", 1)
        lines = [head] + [f"{k} = {v}" for k, v in extra]
        if args.crosscheck:
            lines.append(f"sampled {args.crosscheck} sign matrices: min rank {min(ranks)} >= {cert.bound}")
        lines.append(last)
        text = "\n".join(lines)
    _emit(text, args.output)
    return EXIT_OK


def cmd_brute(args) -> int:
    M, _ = load_input(args.input)
    W = as_rational(M)
    try:
        res = sqrt_rank_bruteforce(W, budget=args.budget, workers=args.workers)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc.required} sign classes required (budget {exc.budget})")
        print(f"required budget: {exc.required}")
        return EXIT_BUDGET
    support = W
    if args.format == "kv":
        text = _kv([
            ("min_rank", res.min_rank),
            ("exhausted", str(res.exhausted).lower()),
            ("classes_enumerated", res.classes_enumerated),
            ("witness", res.witness.to_text(support).replace("\n", "/")),
        ])
    else:
        text = "\n".join([
            f"min sqrt-rank = {res.min_rank}" + (" (exhausted)" if res.exhausted else ""),
            f"classes enumerated: {res.classes_enumerated}",
            "witness:",
            res.witness.to_text(support),
        ])
    _emit(text, args.output)
    return EXIT_OK


def cmd_sigma(args) -> int:
    fam = build_sigma(args.ell)
    ok_anti, ok_sq, ok_entries = fam.anticommute(), fam.squares_identity(), fam.entries_ok()
    lines = []
    if fam.size <= 64 or args.output:
        for j, s in enumerate(fam.matrices, 1):
            lines.append(f"sigma_{j} ({fam.size}x{fam.size})")
            lines.extend(" ".join(f"{v:2d}" for v in row) for row in s.tolist())
    status = (
        f"anticommutation {'OK' if ok_anti else 'FAILED'}, squares {'OK' if ok_sq else 'FAILED'}"
        + ("" if ok_entries else ", entries FAILED")
    )
    if args.output:
        Path(args.output).write_text("\n".join(lines) + "\n")
    else:
        for ln in lines:
            print(ln)
    print(f"{fam.ell} matrices of size {fam.size}")
    print(status)
    return EXIT_OK if ok_anti and ok_sq and ok_entries else EXIT_REFUSED


def _read_decomposition(path: str):
    chunks = [c for c in Path(path).read_text().split("---") if c.strip()]
    return [as_rational(parse_matrix(c)) for c in chunks]


def cmd_extension(args) -> int:
    M, spec = load_input(args.input)
    W = as_rational(M)
    Bs = _read_decomposition(args.decomposition) if args.decomposition else canonical_decomposition(W, args.d)
    try:
        rep = extension_certify(Bs, W)
    except CertificateRefused as exc:
        print(f"REFUSED {_refusal_name(exc)}: {exc}")
        return EXIT_REFUSED
    if spec is not None and spec.family == "P":
        rep.n = spec.n
    _emit(rep.to_kv() if args.format == "kv" else rep.to_text(), args.output)
    return EXIT_OK


def cmd_bounds(args) -> int:
    M, spec = load_input(args.input)
    W = as_rational(M)
    try:
        cert = structural_certificate(W)
    except CertificateRefused:
        cert = None
    fact = None
    if spec is not None and spec.family == "corF":
        fact = nonneg_factorization_F(spec.n)
    rep = bounds_report(W, certificate=cert, factorization=fact)
    _emit(rep.to_kv() if args.format == "kv" else rep.to_text(), args.output)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(verbose=True)
    return EXIT_OK if all(r.passed for r in results) else EXIT_REFUSED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadrank", description="Exact square-root-rank certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("-o", "--output", help="write the result to this file")
        if fmt:
            p.add_argument("--format", choices=("text", "kv"), default="text")

    p = sub.add_parser("gen", help="generate a matrix from a spec such as P:6")
    p.add_argument("spec")
    common(p, fmt=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("certify", help="structural square-root-rank certificate")
    p.add_argument("input", help="matrix spec or matrix file")
    p.add_argument("--crosscheck", type=int, default=0, metavar="K", help="also sample K sign matrices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--digits", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("brute", help="exhaustive square-root-rank search")
    p.add_argument("input")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--workers", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("sigma", help="build and check the anticommuting family")
    p.add_argument("ell", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("extension", help="check the d^2-term decomposition bound")
    p.add_argument("input")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--decomposition", help="file of d^2 matrices separated by '---'")
    common(p)
    p.set_defaults(func=cmd_extension)

    p = sub.add_parser("bounds", help="table of rank, PSD-rank and square-root-rank bounds")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "budget", 1) is not None and getattr(args, "budget", 1) < 1:
        print("error: --budget must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except CertificateRefused as exc:
        print(f"REFUSED {_refusal_name(exc)}: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except QuadrankError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if not isinstance(exc, InputError) and args.command == "gen":
            parser.print_usage(sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
