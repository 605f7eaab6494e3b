"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines and the
measured runtimes.  The committed search seeds live in conftest.COMP_SEARCH.
"""

import itertools
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from conftest import COMP_SEARCH, FIXTURES, RMDS_SEARCH_ATTEMPTS
from eqkit import (
    IntMatrix,
    OpCounter,
    bounds_report,
    build_crt,
    compile_comp_circuit,
    compile_eq_circuit,
    compile_value_set,
    construct_eq,
    crt_residue_check,
    decode,
    encode,
    eval_circuit,
    exactify_to_lt,
    exhaustive_check,
    is_eq_q,
    is_mds,
    is_rmds,
    matvec,
    read_matrix,
    search_rmds,
    theorem3_rate_cap,
)
from eqkit.cli import main
from oracles import det_cofactor


@contextmanager
def criterion(number, label, limit_seconds):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} ({label}): FAIL")
        raise
    elapsed = time.perf_counter() - start
    assert elapsed < limit_seconds, f"criterion {number} took {elapsed:.2f}s"
    print(
        f"ACCEPTANCE {number} ({label}): PASS in {elapsed:.2f}s "
        f"(limit {limit_seconds}s)"
    )


def test_criterion_01_fixture_fidelity(capsys):
    with criterion(1, "fixture fidelity", 1.0):
        assert main(["construct", "eq", "--k", "2"]) == 0
        eq_text = capsys.readouterr().out
        assert eq_text == (FIXTURES / "eq_k2.txt").read_text()
        assert (
            main(["construct", "crt", "--n", "8", "--primes", "3", "5", "7", "11"])
            == 0
        )
        crt_text = capsys.readouterr().out
        assert crt_text == (FIXTURES / "crt_4x8.txt").read_text()


def test_criterion_02_eq_verification(eq_4x8, crt_4x8):
    with criterion(2, "EQ verification, both modes", 5.0):
        for a in (eq_4x8, crt_4x8):
            assert is_eq_q(a, 2, mode="kernel") is None
            assert is_eq_q(a, 2, mode="injectivity") is None
        rng = random.Random(2024)
        for _ in range(200):
            a = IntMatrix.from_rows(
                [[rng.randint(-1, 1) for _ in range(8)] for _ in range(4)]
            )
            kernel = is_eq_q(a, 2, mode="kernel")
            injective = is_eq_q(a, 2, mode="injectivity")
            assert (kernel is None) == (injective is None)


def test_criterion_03_rate_law():
    with criterion(3, "rate law", 1.0):
        for k in range(7):
            a, _ = construct_eq(k)
            assert a.m == 2**k
            assert Fraction(a.n) == Fraction(2**k) * (Fraction(k, 2) + 1)
            r_constr = Fraction(k, 2) + 1
            report = bounds_report(a.n, k_iter=k)
            assert report.r_constr == r_constr
            assert float(r_constr) <= report.lemma2_rate_bound + 1e-12
        at_k2 = bounds_report(8, k_iter=2)
        assert at_k2.r_constr == Fraction(2)
        assert at_k2.r_upper == 2.5


def test_criterion_04_scaled_eq_property():
    with criterion(4, "k=3 injectivity over 2^20", 30.0):
        a, _ = construct_eq(3)
        assert (a.m, a.n) == (8, 20)
        assert is_eq_q(a, 2, mode="injectivity") is None


def test_criterion_05_decoder():
    with criterion(5, "decoder", 10.0):
        a2, trace2 = construct_eq(2)
        assert decode(trace2, (4, -2, -1, 0)) == (0, 1, 0, 0, 1, 1, 1, 0)
        rng = random.Random(5)
        for k in (3, 4):
            a, trace = construct_eq(k)
            for _ in range(10**4):
                x = tuple(rng.randint(0, 1) for _ in range(a.n))
                assert decode(trace, encode(a, x)) == x
        for k in range(1, 7):
            a, trace = construct_eq(k)
            counter = OpCounter()
            decode(trace, encode(a, (1,) * a.n), counter)
            assert counter.ops <= 8 * a.n


def test_criterion_06_rmds_fixtures(crt_5x8):
    with criterion(6, "5x8 residue fixture", 5.0):
        assert is_rmds(crt_5x8, 4, 2) is None
        witness = is_mds(crt_5x8)
        assert witness == (0, 1, 2, 3, 4)
        square = [row[:5] for row in crt_5x8.entries]
        assert det_cofactor(square) == 0


def test_criterion_07_theorem3_gate():
    with criterion(7, "alphabet-size rate gate", 1.0):
        assert bounds_report(8, alphabet_size=3).theorem3_mds_bound == 81
        for weight, rate in ((0, 2), (0, 4), (1, 82), (2, 5**6 + 1)):
            assert rate > theorem3_rate_cap(weight)
            try:
                search_rmds(4, 2, rate, 3, weight, seed=0, max_attempts=1)
            except ValueError:
                pass
            else:
                raise AssertionError(f"rate {rate} at weight {weight} not refused")
        # at the bound itself the search must be allowed to run
        found, attempts = search_rmds(2, 1, 81, 3, 1, seed=0, max_attempts=1)
        assert attempts == 1


def test_criterion_08_rmds_search(capsys, tmp_path):
    with criterion(8, "seeded RMDS_3 search", 120.0):
        params = COMP_SEARCH[4]
        out_file = tmp_path / "found.txt"
        code = main(
            [
                "search",
                "rmds",
                "--n",
                "4",
                "--m",
                "2",
                "--r",
                "4",
                "--q",
                "3",
                "--w",
                "8",
                "--seed",
                str(params["seed"]),
                "--max-attempts",
                "100000",
                "--out",
                str(out_file),
            ]
        )
        capsys.readouterr()
        assert code == 0
        text = out_file.read_text()
        assert f"attempts={RMDS_SEARCH_ATTEMPTS[4]}" in text.splitlines()[0]
        found, _ = read_matrix(text)
        assert (found.m, found.n) == (8, 4)
        assert is_rmds(found, 2, 3) is None  # independent re-verification


def test_criterion_09_eq_circuit(eq_4x8):
    with criterion(9, "EQ circuit", 30.0):
        c = compile_eq_circuit(eq_4x8)
        assert c.gate_count == 5
        assert exhaustive_check(c, "eq", n=8) is None
        lt = exactify_to_lt(c)
        assert exhaustive_check(lt, "eq", n=8) is None


def test_criterion_10_comp_circuits():
    with criterion(10, "COMP circuits", 120.0):
        for n in (3, 4):
            params = COMP_SEARCH[n]
            m, r = params["m"], params["r"]
            a, attempts = search_rmds(
                n, m, r, params["q"], params["weight"], params["seed"], 10**5
            )
            assert a is not None and attempts == RMDS_SEARCH_ATTEMPTS[n]
            c = compile_comp_circuit(a, n, m, r)
            assert c.gate_count == r * m * n + 1
            layer = sorted(g.gid for g in c.gates.values() if g.kind == "EXACT")
            for xv, yv in itertools.product(range(2**n), repeat=2):
                bits = tuple((xv >> i) & 1 for i in range(n)) + tuple(
                    (yv >> i) & 1 for i in range(n)
                )
                _, trace = eval_circuit(c, bits, want_trace=True)
                ones = sum(trace[g] for g in layer)
                if xv < yv:
                    assert ones >= r * m
                else:
                    assert ones < n * (m - 1)
            assert exhaustive_check(c, "comp", n=n) is None


def test_criterion_11_parity_value_sets():
    with criterion(11, "PARITY value sets", 1.0):
        binary = compile_value_set((1, 2, 4), {1, 2, 4, 7})
        assert exhaustive_check(binary, "parity") is None
        unary = compile_value_set((1, 1, 1), {1, 3})
        assert exhaustive_check(unary, "parity") is None


def test_criterion_12_trichotomy_and_residues(crt_4x8):
    with criterion(12, "trichotomy and residue property", 5.0):
        for n in range(1, 7):
            for xv, yv in itertools.product(range(2**n), repeat=2):
                d = [((xv >> i) & 1) - ((yv >> i) & 1) for i in range(n)]
                windows = [
                    sum(d[j] << (j - l) for j in range(l, n)) for l in range(n)
                ]
                plus = any(w == 1 for w in windows)
                minus = any(w == -1 for w in windows)
                cases = [plus, minus, xv == yv]
                assert cases.count(True) == 1
                assert plus == (xv > yv) and minus == (xv < yv)
        x = (2, 1, 1, 3, 0, 1, -1, 0)
        assert matvec(crt_4x8, x) == (12, 15, 14, 33)
        assert crt_residue_check((3, 5, 7, 11), crt_4x8, x) is None
