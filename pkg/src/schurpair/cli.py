"""Command-line interface: ``schurpair <command> ...``.

Exit codes: 0 success, 1 verification mismatch, 2 parse or input error,
3 budget exceeded, 4 internal error, 5 missing complement or direct factor.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import classify as C
from .abelian import prime_power_log
from .catalog import (Product, Semidirect, build, catalog_closure, groups_of_order_specs,
                      parse_spec, render, spec_order)
from .errors import (BoundViolation, BudgetExceeded, GroupTableError, InternalFreeRank,
                     NoComplement, NotAComplex, NotADirectFactor, ParseError, SchurPairError,
                     SemanticError, UnsupportedOrder)
from .homology import HARD_CAP, MULTIPLIER_CACHE, schur_multiplier
from .pairs import make_context


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(data, fmt: str, text: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text + "\n")


def _budget(args, p: int | None) -> int:
    budget = args.budget if args.budget is not None else C.default_budget(p or 2)
    if budget > HARD_CAP:
        raise BudgetExceeded(f"budget {budget} exceeds the hard cap {HARD_CAP}")
    return budget


def cmd_multiplier(args) -> int:
    spec = parse_spec(args.spec)
    G = build(spec).group
    p = G.prime()
    M = schur_multiplier(G, _budget(args, p))
    data = {"spec": render(spec), "order": G.order, "multiplier": M.to_json(),
            "multiplier_order": M.order, "t": None}
    line = f"M = {M} (order {M.order})"
    if p is not None or G.order == 1:
        n = prime_power_log(G.order, p or 2)
        t = n * (n - 1) // 2 - prime_power_log(M.order, p or 2)
        data["t"] = t
        line += f", t = {t}"
    _emit(data, args.format, line)
    return 0


def _pair_context(args):
    n_spec, k_spec = parse_spec(args.n_spec), parse_spec(args.k_spec)
    if getattr(args, "action", None):
        action = str(Path(args.action).resolve())
        spec = Semidirect(n_spec, k_spec, action)
    else:
        spec = Product(n_spec, k_spec)
    built = build(spec)
    G = built.group
    p = G.prime()
    ctx = make_context(G, built.N, built.K, p or 2)
    label = f"N = {render(n_spec)}, K = {render(k_spec)}"
    if isinstance(spec, Semidirect):
        label += f", action {args.action}"
    return label, ctx, _budget(args, p)


def _report_text(label: str, data: dict) -> str:
    cases = ", ".join(data["matched_cases"]) or "none"
    return "\n".join([
        f"pair {label}  (p = {data['p']}, n = {data['n']}, m = {data['m']})",
        f"M(G)   = {_inv(data['mG'])}",
        f"M(K)   = {_inv(data['mK'])}",
        f"M(G,N) = {_inv(data['mGN'])}",
        f"t = {data['t']}, bound1_slack = {data['bound1_slack']}, "
        f"bound7_holds = {data['bound7_holds']}",
        f"|[N,G]| = {data['commutator_order']}, |Z(N,G)| = {data['pair_center_order']}",
        f"matched: {cases}  status: {data.get('status')}",
    ])


def _inv(factors: list[int]) -> str:
    return " x ".join(f"Z{f}" for f in factors) if factors else "1"


def cmd_pair(args) -> int:
    label, ctx, budget = _pair_context(args)
    report = C.report_pair(ctx, budget)
    data = {"pair": label, **report.to_json()}
    _emit(data, args.format, _report_text(label, data))
    return 0


def cmd_classify(args) -> int:
    label, ctx, budget = _pair_context(args)
    report = C.report_pair(ctx, budget)
    verdict = C.classify_pair(ctx, report.t)
    data = {"pair": label, "verdict": verdict.to_json()}
    text = (f"pair {label}: t = {verdict.t}, status {verdict.status}, "
            f"matched {', '.join(verdict.matched) or 'none'}"
            + (f" ({verdict.note})" if verdict.note else ""))
    _emit(data, args.format, text)
    return 0


def _verify_text(reports: list[dict]) -> str:
    lines = []
    for r in reports:
        b = r["backward"]
        fwd = r["forward"]
        good = sum(1 for e in fwd if e["ok"] is True)
        skipped = sum(1 for e in fwd if e["ok"] is None)
        lines.append(f"{r['theorem']} p={r['p']} budget={r['budget']}: forward {good}/{len(fwd)} ok"
                     + (f" ({skipped} skipped)" if skipped else "")
                     + f"; backward {b['pairs_checked']} pairs, {b['confirmed']} confirmed, "
                       f"{b['unlisted']} unlisted, {len(b['mismatches'])} mismatches")
        for e in fwd:
            if e["ok"] is False:
                lines.append(f"  FORWARD FAIL {e['case']}: N={e['N']} K={e['K']} "
                             f"t={e['t']} expected {e['expected']}")
        for mm in b["mismatches"]:
            lines.append(f"  MISMATCH {mm['pair']}: t={mm['t']} {mm['note']}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    ids: list[str] = []
    for item in args.theorems:
        for tok in item.split(","):
            tok = tok.strip()
            if tok == "all":
                ids.extend(C.THEOREMS)
            elif tok in C.THEOREMS:
                ids.append(tok)
            else:
                raise CliFailure(2, f"unknown theorem id {tok!r}; choose from "
                                    f"{', '.join(C.THEOREMS)} or all")
    ids = list(dict.fromkeys(ids))
    primes = _primes(args.p)
    reports = [C.verify_theorem(t, p, _budget(args, p)) for p in primes for t in ids]
    ok = all(C.report_ok(r) for r in reports)
    _emit({"reports": reports, "ok": ok}, args.format, _verify_text(reports))
    return 0 if ok else 1


def _primes(text: str) -> list[int]:
    try:
        primes = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise CliFailure(2, f"--p expects a comma-separated list of primes, got {text!r}") from None
    if not primes:
        raise CliFailure(2, "--p must name at least one prime")
    for p in primes:
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise CliFailure(2, f"{p} is not prime")
    return primes


def _parse_order(text: str) -> tuple[int, int]:
    if "^" in text:
        p, k = text.split("^", 1)
        return int(p), int(k)
    n = int(text)
    for p in range(2, n + 1):
        if n % p == 0:
            return p, prime_power_log(n, p)
    raise ValueError(text)


def cmd_catalog(args) -> int:
    if args.order:
        try:
            p, k = _parse_order(args.order)
        except ValueError:
            raise CliFailure(2, f"--order expects p^k or a prime power, got {args.order!r}") from None
        specs = groups_of_order_specs(p, k)
    else:
        specs = [s for p in _primes(args.p) for s in catalog_closure(p, _budget(args, p))]
    rows = [{"spec": render(s), "order": spec_order(s)} for s in specs]
    _emit({"groups": rows}, args.format, "\n".join(f"{r['order']:>4}  {r['spec']}" for r in rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommand copies must not reset values given before the subcommand
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        f = argparse.ArgumentParser(add_help=False)
        f.add_argument("--format", choices=("text", "json"), default=d("text"))
        f.add_argument("--cache", default=d(None), help="JSON file for the multiplier cache")
        f.add_argument("--budget", type=int, default=d(None),
                       help=f"max group order for homology (<= {HARD_CAP})")
        return f

    common = flags(True)
    parser = argparse.ArgumentParser(prog="schurpair", parents=[flags(False)],
                                     description="Schur multipliers of groups and pairs")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("multiplier", parents=[common], help="M(G) of a group spec")
    m.add_argument("spec")
    m.set_defaults(func=cmd_multiplier)

    for name, func, text in (("pair", cmd_pair, "report on the pair (N x K, N)"),
                             ("classify", cmd_classify, "classify the pair (N x K, N)")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("n_spec")
        s.add_argument("k_spec")
        s.add_argument("--action", help="action file for a semidirect product")
        s.set_defaults(func=func)

    v = sub.add_parser("verify", parents=[common], help="run the theorem verification harness")
    v.add_argument("theorems", nargs="+", help="T5, T10, T12, T13, T14, T15 or all")
    v.add_argument("--p", default="2,3", help="comma-separated primes (default 2,3)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("catalog", parents=[common], help="list catalogued groups")
    c.add_argument("--order", help="p^k with k <= 3")
    c.add_argument("--p", default="2,3")
    c.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cache = Path(args.cache) if args.cache else None
    try:
        if cache is not None and cache.exists():
            MULTIPLIER_CACHE.load(cache)
        code = args.func(args)
        if cache is not None:
            MULTIPLIER_CACHE.save(cache)
        return code
    except CliFailure as e:
        return _fail(e.code, str(e))
    except (ParseError, SemanticError, UnsupportedOrder, GroupTableError) as e:
        return _fail(2, f"{type(e).__name__}: {e}")
    except BudgetExceeded as e:
        return _fail(3, f"BudgetExceeded: {e}")
    except (NoComplement, NotADirectFactor) as e:
        return _fail(5, f"{type(e).__name__}: {e}")
    except (InternalFreeRank, BoundViolation, NotAComplex, AssertionError) as e:
        return _fail(4, f"internal error: {type(e).__name__}: {e}")
    except (OSError, json.JSONDecodeError) as e:
        return _fail(2, f"{type(e).__name__}: {e}")
    except SchurPairError as e:
        return _fail(2, f"{type(e).__name__}: {e}")


def _fail(code: int, message: str) -> int:
    sys.stderr.write(message + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
