"""Command-line front door.

Subcommands: decide, admissible, construct, verify.
Exit codes: 0 feasible / success, 1 infeasible, 2 input error.
All rationals print as exact "p/q" strings; output is deterministic for a
given (input, seed, flags) triple.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .extended import INF, is_inf
from .feasibility import (SpectrumTarget, admissible_set, decide,
                          decide_case_a, search_witness)
from .oracle import (brute_force_witness, decide_case_a_approx, eig_multiset,
                     sample_diagonal)
from .realize import construct_hermitian, construct_three_point
from .sequences import (DiagonalSpec, format_rational, parse_rational,
                        spec_from_json)


class InputError(Exception):
    pass


def _load_spec(args) -> DiagonalSpec:
    if bool(args.input) == bool(args.json):
        raise InputError("exactly one of --input or --json is required")
    raw = args.json
    if args.input:
        try:
            with open(args.input) as fh:
                raw = fh.read()
        except OSError as e:
            raise InputError(str(e))
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}")
    try:
        return spec_from_json(data)
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"invalid sequence spec: {e}")


def _mult(text):
    if text == "inf":
        return INF
    try:
        return int(text)
    except ValueError:
        raise InputError(f"multiplicity must be an integer or 'inf', got {text!r}")


def _target(args, B) -> SpectrumTarget:
    for name in ("A", "m0", "mA", "mB"):
        if getattr(args, name) is None:
            raise InputError(f"--{name} is required")
    A = parse_rational(args.A)
    if args.B is not None and parse_rational(args.B) != B:
        raise InputError("--B disagrees with the spec's bound")
    try:
        return SpectrumTarget(A, B, _mult(args.m0), _mult(args.mA), _mult(args.mB))
    except ValueError as e:
        raise InputError(str(e))


def _fmt_mult(m):
    return "inf" if is_inf(m) else int(m)


def _emit(obj, fmt, table_lines):
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True, indent=2))
    else:
        for line in table_lines:
            print(line)


def cmd_decide(args) -> int:
    seq = _load_spec(args)
    target = _target(args, seq.bound_B)
    dec = decide(seq, target)
    out = {"feasible": dec.feasible}
    lines = []
    if dec.feasible:
        w = dec.witness
        out["case"] = w.case_label
        out["witness"] = {"N": w.N, "k": w.k, "n": w.n}
        lines.append(f"feasible (case {w.case_label})")
        if w.N is not None:
            lines.append(f"  witness N={w.N}, k={w.k}")
    else:
        out["violation"] = {"condition": dec.violation[0], "detail": dec.violation[1]}
        lines.append(f"infeasible: {dec.violation[0]} ({dec.violation[1]})")
    _emit(out, args.format, lines)
    return 0 if dec.feasible else 1


def cmd_admissible(args) -> int:
    seq = _load_spec(args)
    result = admissible_set(seq)
    if result.full:
        _emit({"full_interval": True, "values": None}, args.format, ["(0,1)"])
        return 0
    vals = []
    lines = []
    for e in result.entries:
        lo, hi = e.interval
        vals.append({
            "A": format_rational(e.A),
            "N": e.N,
            "k": e.k,
            "interval": [format_rational(lo), format_rational(hi)],
        })
        lines.append(f"A = {format_rational(e.A):>8}   N={e.N}, k={e.k}   "
                     f"breakpoints ({format_rational(lo)}, {format_rational(hi)}]")
    if not lines:
        lines = ["{}"]
    _emit({"full_interval": False, "values": vals}, args.format, lines)
    return 0


def cmd_construct(args) -> int:
    seq = _load_spec(args)
    if seq.tails:
        raise InputError("construct requires a finite sequence (no tails)")
    target = _target(args, seq.bound_B)
    if any(is_inf(m) for m in (target.m0, target.mA, target.mB)):
        raise InputError("construct requires finite multiplicities")
    dec = decide_case_a(seq, target)
    if not dec.feasible:
        print(f"infeasible: {dec.violation[0]} ({dec.violation[1]})")
        return 1
    M = construct_three_point(seq.finite_terms, target.A, seq.bound_B,
                              target.m0, target.mA, target.mB)
    diag_err = max(abs(M[i, i] - float(x)) for i, x in enumerate(seq.finite_terms))
    want = sorted([float(seq.bound_B)] * target.mB + [float(target.A)] * target.mA
                  + [0.0] * target.m0)
    got = eig_multiset(M)
    eig_err = float(np.max(np.abs(got - np.array(want))))
    out = {
        "n": M.shape[0],
        "rows": [[float(x) for x in row] for row in M],
        "diag_error": diag_err,
        "eig_error": eig_err,
    }
    lines = [" ".join(f"{x:12.8f}" for x in row) for row in M]
    lines.append(f"diag error {diag_err:.3e}, eig error {eig_err:.3e}")
    _emit(out, args.format, lines)
    return 0


def _verify_sampling(rng, trials):
    fails = 0
    for _ in range(trials):
        n = int(rng.integers(3, 11))
        K = int(rng.integers(1, n))
        N = int(rng.integers(1, n - K + 1)) if n - K > 1 else 0
        Z = n - N - K
        if Z < 0 or N + K + Z != n or (Z == 0 and N == 0):
            continue
        A, B = 0.5, 1.0
        spectrum = [B] * K + [A] * N + [0.0] * Z
        d = sample_diagonal(spectrum, seed=int(rng.integers(0, 2**32)))
        if not decide_case_a_approx(d, A, B, Z, N, K):
            fails += 1
    return fails


def _verify_witness_search(rng, trials):
    fails = 0
    for _ in range(trials):
        A = Fraction(int(rng.integers(1, 20)), 40)
        B = Fraction(1)
        if not 0 < A < B:
            continue
        N = int(rng.integers(1, 6))
        k = int(rng.integers(-5, 6))
        D = Fraction(int(rng.integers(0, 200)), 17)
        C = D + N * A + k * B
        if C <= 0:
            continue
        mine = search_witness(C, D, A, B)
        ref = brute_force_witness(C, D, A, B, N_max=10000, k_max=10000)
        if mine != ref:
            fails += 1
    return fails


def _verify_roundtrip(rng, trials):
    fails = 0
    for _ in range(trials):
        n = int(rng.integers(2, 13))
        K = int(rng.integers(1, n))
        N = int(rng.integers(0, n - K + 1))
        Z = n - N - K
        A = Fraction(int(rng.integers(1, 8)), 8)
        B = Fraction(1)
        d = sample_diagonal([1.0] * K + [float(A)] * N + [0.0] * Z,
                            seed=int(rng.integers(0, 2**32)))
        diag = [Fraction(x).limit_denominator(10**6) for x in d]
        # snap the trace back to the exact total
        diag[0] += (K * B + N * A) - sum(diag)
        if not (0 <= diag[0] <= B):
            continue
        try:
            M = construct_hermitian([B] * K + [A] * N + [Fraction(0)] * Z, diag)
        except ValueError:
            fails += 1
            continue
        if max(abs(M[i, i] - float(x)) for i, x in enumerate(diag)) > 1e-12:
            fails += 1
            continue
        want = np.sort(np.array([1.0] * K + [float(A)] * N + [0.0] * Z))
        if np.max(np.abs(eig_multiset(M) - want)) > 1e-8:
            fails += 1
    return fails


def cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    trials = args.trials
    suites = [
        ("sampling-consistency", _verify_sampling),
        ("witness-search", _verify_witness_search),
        ("jacobi-roundtrip", _verify_roundtrip),
    ]
    total_fail = 0
    for name, fn in suites:
        fails = fn(rng, trials)
        print(f"{name}: {trials} trials, {fails} failures")
        total_fail += fails
    return 0 if total_fail == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="threepoint",
        description="Decide, enumerate and realize diagonals of operators "
                    "with spectrum {0, A, B}.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec_input=True):
        if spec_input:
            sp.add_argument("--input", help="path to a sequence spec JSON file")
            sp.add_argument("--json", help="inline sequence spec JSON")
        sp.add_argument("--format", choices=("json", "table"), default="json")

    def target_flags(sp):
        sp.add_argument("--A", help="inner eigenvalue, exact p/q")
        sp.add_argument("--B", help="upper eigenvalue, exact p/q (must match spec)")
        sp.add_argument("--m0", help="multiplicity of 0 (int or 'inf')")
        sp.add_argument("--mA", help="multiplicity of A (int or 'inf')")
        sp.add_argument("--mB", help="multiplicity of B (int or 'inf')")

    sp = sub.add_parser("decide", help="decide feasibility of a target")
    common(sp)
    target_flags(sp)
    sp.set_defaults(fn=cmd_decide)

    sp = sub.add_parser("admissible", help="enumerate admissible inner eigenvalues")
    common(sp)
    sp.set_defaults(fn=cmd_admissible)

    sp = sub.add_parser("construct", help="build a certifying matrix (finite case)")
    common(sp)
    target_flags(sp)
    sp.set_defaults(fn=cmd_construct)

    sp = sub.add_parser("verify", help="run the seeded oracle suites")
    common(sp, spec_input=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=50)
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
