"""``cfsum`` command line: solve, verify, analyze, indefinite, certify.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 unsupported class.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .closer import (
    ClosedForm,
    ProblemError,
    SumProblem,
    UnsupportedBasisError,
    VerificationError,
    brute_force_sum,
    build_basis,
    certify_identity,
    degree_bound,
    evaluate_closed_form,
    solve,
)
from .exact import DegreeLimitError, InconsistentSystemError
from .indefinite import independence_check
from .sequence import (
    BackwardExtensionError,
    SequenceError,
    UnsupportedSequenceError,
    UnsupportedSpectrumError,
)
from .serialize import (
    closed_form_from_json,
    closed_form_to_json,
    load_sequences,
    parse_builtin_ref,
    problem_from_json,
    rat,
    render,
    resolve,
)
from .spectra import UnsupportedProfileError, analyze, uniqueness_report

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 1, 2, 3

UNSUPPORTED = (UnsupportedSequenceError, UnsupportedBasisError, UnsupportedProfileError,
               UnsupportedSpectrumError, DegreeLimitError, BackwardExtensionError)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(obj, out) -> None:
    out.write(json.dumps(obj, indent=2) + "\n")


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", EXIT_INVALID) from None
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: invalid JSON ({e})", EXIT_INVALID) from None


def envelope(cf: ClosedForm, identities, M: int, bound: int, verdict: str | None = None) -> dict:
    env = {
        "closed_form": closed_form_to_json(cf),
        "rendering": render(cf),
        "identities": [closed_form_to_json(i) for i in identities],
        "identity_renderings": [render(i) for i in identities],
        "M": M,
        "degree_bound": bound,
    }
    if verdict is not None:
        env["uniqueness"] = verdict
    return env


def cmd_solve(args, out) -> int:
    pf = problem_from_json(_load_json(args.file))
    kw = {"conservative": True} if pf.conservative_psi and pf.basis == "shifted" else {}
    basis = build_basis(pf.problem, pf.basis, **kw)
    sol = solve(pf.problem, basis, extra_checks=pf.extra_checks, anchor=pf.anchor)
    verdict = None
    if pf.uniqueness or args.uniqueness:
        verdict = uniqueness_report(pf.problem, basis).verdict
    _emit(envelope(sol.particular, sol.identities, basis.M, degree_bound(pf.problem), verdict), out)
    return EXIT_OK


def _form_payload(data):
    # a bare closed form, or a solve envelope holding one
    return data["closed_form"] if isinstance(data, dict) and "closed_form" in data else data


def cmd_verify(args, out) -> int:
    pf = problem_from_json(_load_json(args.file))
    cf = closed_form_from_json(_form_payload(_load_json(args.form)), pf.sequences)
    if args.window < 0:
        raise CliError("window must be >= 0", EXIT_INVALID)
    if args.window == 0:
        print("warning: window 0 checks nothing", file=sys.stderr)
    for n in range(args.window):
        expected = brute_force_sum(pf.problem, n)
        got = evaluate_closed_form(cf, n)
        if got != expected:
            _emit({"verdict": "fail", "n": n, "closed_form": rat(got), "sum": rat(expected)}, out)
            return EXIT_FAIL
    _emit({"verdict": "pass", "window": args.window}, out)
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    seq = parse_builtin_ref(args.seq)
    if args.p < 0 or args.q < 0:
        raise CliError("p and q must be >= 0", EXIT_INVALID)
    _emit(analyze(seq, args.p, args.q), out)
    return EXIT_OK


def cmd_indefinite(args, out) -> int:
    pf = problem_from_json(_load_json(args.file))
    variants = pf.variants or [list(next(iter(pf.problem.sequences.values())).initials)]
    rep = independence_check(pf.problem, variants)
    _emit({
        "variants": [
            {"initials": {k: [rat(x) for x in v] for k, v in r.initials.items()}
             if isinstance(r.initials, dict) else [rat(x) for x in r.initials],
             "psi": [rat(c) for c in r.psi.coeffs],
             "identities": r.identities}
            for r in rep.variants
        ],
        "sequence_part": closed_form_to_json(rep.shared_sequence_part),
        "sequence_part_rendering": render(rep.shared_sequence_part),
        "sequence_part_agrees": rep.sequence_part_agrees,
        "psi_degree_bound": rep.psi_bound if rep.theta_one else 0,
        "degrees_ok": rep.degrees_ok,
        "verdict": "independent" if rep.verdict else "dependent",
    }, out)
    return EXIT_OK if rep.verdict else EXIT_FAIL


def _side(data, registry: dict):
    """Closed form plus optional sum problem from a certify input file."""
    if not isinstance(data, dict):
        raise ProblemError("certify inputs must be JSON objects")
    for name, seq in load_sequences(data.get("sequences")).items():
        other = registry.setdefault(name, seq)
        if not other.same_values(seq):
            raise ProblemError(f"sequence {name!r} is declared differently on the two sides")
    problem = None
    if "problem" in data:
        problem = problem_from_json(data).problem
        for seq in problem.sequences.values():
            registry.setdefault(seq.name, seq)
    form = data.get("closed_form", {"terms": []})
    for f in (t for term in form.get("terms", []) for t in term.get("factors", [])):
        if f.get("seq") not in registry:
            resolve(f.get("seq"), registry)
    return form, problem


def cmd_certify(args, out) -> int:
    registry: dict = {}
    lhs_raw, lhs_p = _side(_load_json(args.lhs), registry)
    rhs_raw, rhs_p = _side(_load_json(args.rhs), registry)
    if rhs_p is not None:
        raise ProblemError("put the sum on the left-hand side")
    seqs = {**registry, **{s.name: s for s in registry.values()}}
    lhs = closed_form_from_json(lhs_raw, seqs)
    rhs = closed_form_from_json(rhs_raw, seqs)
    cert = certify_identity(lhs, rhs, p=lhs_p, start=args.start)
    payload = {
        "verdict": "pass" if cert.verdict else "fail",
        "bound": cert.bound,
        "window": list(cert.window),
    }
    if not cert.verdict:
        payload.update(n=cert.counterexample, lhs=rat(cert.lhs_value), rhs=rat(cert.rhs_value))
    _emit(payload, out)
    return EXIT_OK if cert.verdict else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cfsum", description="Closed forms for sums of C-finite sequences.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a summation problem file")
    s.add_argument("file")
    s.add_argument("--uniqueness", action="store_true", help="also report the uniqueness verdict")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a closed form against the brute-force sum")
    v.add_argument("file")
    v.add_argument("--form", required=True, help="closed form JSON (or a solve envelope)")
    v.add_argument("--window", type=int, default=30, help="check n = 0 .. window-1")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="value-set dimensions for a builtin sequence")
    a.add_argument("--seq", required=True, help="e.g. fibonacci, subword(3)")
    a.add_argument("-p", type=int, required=True)
    a.add_argument("-q", type=int, default=0)
    a.set_defaults(func=cmd_analyze)

    i = sub.add_parser("indefinite", help="initial-condition independence check")
    i.add_argument("file")
    i.set_defaults(func=cmd_indefinite)

    c = sub.add_parser("certify", help="prove an identity between closed forms")
    c.add_argument("lhs")
    c.add_argument("rhs")
    c.add_argument("--start", type=int, default=0)
    c.set_defaults(func=cmd_certify)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except UNSUPPORTED as e:
        print(f"unsupported: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (VerificationError, InconsistentSystemError) as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (ProblemError, SequenceError, KeyError, TypeError, ValueError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
