"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import functools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction

from albanese import reference
from albanese.connext import log_extension, universal_conn_matrix, verify_log_poles
from albanese.evalnum import LogPolynomial, tangential_value
from albanese.exactalg import LaurentSeries, curve_new
from albanese.hodge import (Basepoint, HodgeGenerators, check_conditions_Im, genus2_example,
                            hodge_constants, hodge_f0)
from albanese.periods import pcr_symbolic, period_map
from albanese.wordalg import (LieExpr, TensorElem, concat_mul, coproduct, exp_trunc, is_grouplike,
                              is_primitive, lie_expand, log_trunc, parse_letters, shuffle_words,
                              tensor_mul)

EC = [1, 0, 0, 1]
EC_ALT = [1, -1, 0, 1]
HEC = [1, 0, 0, 0, 0, 1]
HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
RESULTS = {}


def criterion(number, title, budget):
    def wrap(body):
        @functools.wraps(body)
        def run():
            start = time.perf_counter()
            error = None
            try:
                body()
            except AssertionError as exc:
                error = exc
            elapsed = time.perf_counter() - start
            if error is None and elapsed >= budget:
                error = AssertionError(f"took {elapsed:.2f}s, budget {budget}s")
            status = "PASS" if error is None else "FAIL"
            line = f"{status} criterion {number}: {title} ({elapsed:.2f}s / {budget}s)"
            if error is not None:
                line += " :: " + str(error).splitlines()[0]
            RESULTS[number] = line
            print(line)
            if error is not None:
                raise error
        return run
    return wrap


def _tensor(c, n, items):
    out = TensorElem(n, c.genus)
    for coeff, w in items:
        coeff = coeff if hasattr(coeff, "is_zero") else c.one() * coeff
        if w.startswith("["):
            t = lie_expand(LieExpr.parse(c.genus, [(w, Fraction(1))]), n)
        else:
            t = TensorElem.word(parse_letters(w, c.genus), n, c.genus)
        out = out + t.map_coeffs(lambda v, k=coeff: k * v)
    return out


@criterion(1, "level-2 gauge and connection on elliptic curves", 1.0)
def test_criterion_1_gauge_level2():
    for f in (EC, EC_ALT):
        c = curve_new(f)
        ext = log_extension(c, 2)
        F = ext.h_at(2, 0, 1)
        assert (F.d() - c.alpha(1)).pole_order(1) <= 1, f"F not a log-pole primitive on {f}"
        z = 0
        H2 = ext.gauge().lower_block(2)
        assert H2 == [[z, z, z], [z, z, z], [F, z, z], [z, F, F * F * HALF]], f"H2 mismatch on {f}"
        a0, a1p = c.alpha(0), -c.alpha(1) + F.d()
        D2 = ext.connection().lower_block(2)
        assert D2 == [[-a0, z, z], [z, -a0, -(a0 * F)], [a1p, z, a0 * F], [z, a1p, z]], f"D2 mismatch on {f}"


@criterion(2, "level-3/4 gauge with lambda and mu on elliptic curves", 5.0)
def test_criterion_2_gauge_level34():
    for f in (EC, EC_ALT):
        c = curve_new(f)
        ext = log_extension(c, 4)
        F = ext.h_at(2, 0, 1)
        k = hodge_constants(c, ext)
        lam, mu = k.lam, k.mu
        pole = c.expand_form(F.d() * lam - c.alpha(0) * (F * F * HALF), 0)
        assert pole.val >= -1, "lambda condition"
        z = 0
        H3 = ext.gauge(3).lower_block(3)
        assert H3 == [
            [z] * 7, [z] * 7, [z] * 7,
            [z, z, z, z, z, z, F * lam],
            [F, z, z, z, z, z, z],
            [z, F, z, z, z, z, F * (-2 * lam)],
            [z, z, F, z, F * F * HALF, z, F * lam],
            [z, z, z, F, z, F * F * HALF, F * F * F * Fraction(1, 6)],
        ], f"H3 mismatch on {f}"
        G1 = ext.gauge_one(4)
        F2 = F * F
        expected = {
            "A0A1A1A1": F2 * (lam / 6) + F * mu,
            "A1A0A1A1": F2 * (lam / 2) - F * (3 * mu),
            "A1A1A0A1": F * (3 * mu) - F2 * (lam * Fraction(3, 2)),
            "A1A1A1A0": F2 * (lam * Fraction(5, 6)) - F * mu,
            "A1A1A1A1": F2 * F2 * Fraction(1, 24),
        }
        for w, v in expected.items():
            assert G1[w] == v, f"G4(1) coefficient of {w} on {f}"
        if f == EC:
            assert abs(lam) == 2 and mu == 0, f"lambda={lam}, mu={mu}"


def _expected_ec(c, n, k, xb):
    gens = {0: [(1, "1")], 1: [(1, "A1")], 2: [(1, "A1A1")], 3: [(1, "A1A1A1")], 4: [(1, "A1A1A1A1")]}
    if n >= 3:
        gens[1].append((k.lam, "[[A0,A1],A1]"))
    if n >= 4:
        gens[0].append(((c.x - xb) * (k.nu * THIRD), "[A1,[A1,[A1,A0]]]"))
        gens[1].append((-(k.mu + k.kappa * THIRD), "[A1,[A1,[A1,A0]]]"))
        gens[2] += [(k.lam, "A0A1A1A1"), (-k.lam, "A1A0A1A1"), (-k.lam, "A1A1A0A1"), (k.lam, "A1A1A1A0")]
    return [_tensor(c, n, gens[m]) for m in range(n + 1)]


@criterion(3, "Hodge filtration generators on elliptic curves, levels 1-4", 10.0)
def test_criterion_3_hodge_elliptic():
    c = curve_new(EC)
    ext = log_extension(c, 4)
    k = hodge_constants(c, ext)
    assert k.kappa == 0 and k.mu == 0 and abs(k.nu) == 8 and abs(k.lam) == 2, "standard constants"
    for b in ((2, 3), (0, 1), (-1, 0)):
        bp = Basepoint(Fraction(b[0]), Fraction(b[1]))
        for n in (1, 2, 3, 4):
            gens = hodge_f0(c, n, bp, ext)
            got = [t for _, _, t in gens.generators("X")]
            assert got == _expected_ec(c, n, k, Fraction(b[0])), f"generators at level {n}, b={b}"
            assert not check_conditions_Im(gens, ext)["failures"], f"conditions at level {n}, b={b}"


@criterion(4, "Hodge filtration at level 2 on y^2 = x^5 + 1", 10.0)
def test_criterion_4_hodge_hyperelliptic():
    c = curve_new(HEC)
    ext = log_extension(c, 2)
    g = c.genus
    for b in ((2, None), (0, 1), (-1, 0)):
        bp = Basepoint(Fraction(b[0]), None if b[1] is None else Fraction(b[1]))
        gens = genus2_example(basepoint=bp)
        expected = [_tensor(c, 2, [(1, "1"), ((c.x - b[0]) * Fraction(-2, 3), "[A1,A3]")])]
        expected += [_tensor(c, 2, [(1, w)]) for w in ("A2", "A3", "A2A2", "A2A3", "A3A2", "A3A3")]
        assert [t for _, _, t in gens.generators("X")] == expected, f"example generators at b={b}"
        assert not check_conditions_Im(gens, ext)["failures"], f"conditions at b={b}"
    gens = hodge_f0(c, 2, Basepoint(Fraction(0), Fraction(1)), ext)
    one = gens.generator(0, 1, "X")
    for i in range(2 * g):
        for j in range(2 * g):
            aij = one.coeff((i, j), c.zero())
            assert (aij + one.coeff((j, i), c.zero())).is_zero(), "a_ij antisymmetry"
            if i < g and j < g:
                assert aij.is_zero(), "a_ij vanishing"
    for kk in range(g, 2 * g):
        t = gens.generator(1, kk + 1, "X")
        for i in range(2 * g):
            for j in range(2 * g):
                cijk = t.coeff((i, j), c.zero())
                assert cijk.is_zero() or cijk.is_constant(), "c_ijk constant"
                assert cijk + t.coeff((j, i), c.zero()) == 0, "c_ijk antisymmetry"
                if i < g and j < g:
                    assert cijk.is_zero(), "c_ijk vanishing"


@criterion(5, "period maps against the closed forms", 30.0)
def test_criterion_5_period_maps():
    failures = []

    def check(label, expected, res):
        if not reference.difference(expected, res.u_tensor).is_zero():
            failures.append(label)

    ec = curve_new(EC)
    ext = log_extension(ec, 4)
    for n in (2, 3):
        res = period_map(n, ec, "rational", ext)
        check(f"u{n} rational", reference.elliptic_rational(n, res.forms, res.constants), res)
    res = period_map(4, ec, "rational", ext)
    # the level-4 closed form exactly as printed
    printed = reference.elliptic_rational(4, res.forms, res.constants, last_word=("a0", "a1", "a0", "a1"))
    check("u4 rational", printed, res)
    for n in (2, 3):
        res = period_map(n, ec, "tangential", ext)
        check(f"u{n} tangential", reference.elliptic_tangential(n, res.forms, res.constants), res)
    hec = curve_new(HEC)
    hext = log_extension(hec, 2)
    res = period_map(2, hec, "rational", hext)
    check("u2 genus 2 rational", reference.hyperelliptic_rational(res.forms, 2, res.constants), res)
    res = period_map(2, hec, "tangential", hext)
    check("u2 genus 2 tangential", reference.hyperelliptic_tangential(res.forms, 2, hext, res.constants), res)
    assert not failures, "mismatch: " + ", ".join(failures)


def _random_element(rng, g, n, zero_constant=False):
    terms = {}
    for _ in range(rng.randint(0, 6)):
        w = tuple(rng.randrange(2 * g) for _ in range(rng.randint(1 if zero_constant else 0, n)))
        terms[w] = Fraction(rng.randint(-12, 12), rng.randint(1, 4))
    return TensorElem(n, g, terms)


def _random_series(rng, min_val):
    return LaurentSeries(rng.randint(min_val, 1),
                         [Fraction(rng.randint(-15, 15), rng.randint(1, 5)) for _ in range(rng.randint(1, 4))])


def _random_point(rng):
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 7), rng.randint(15, 40))


@criterion(6, "property suites (Hopf structure, conditions, log poles, regularized integrals)", 120.0)
def test_criterion_6_properties():
    rng = random.Random(20240611)
    # (a) group-like pcr and primitive u
    for f in (EC, HEC):
        c = curve_new(f)
        ext = log_extension(c, 3 if c.genus == 1 else 2)
        for kind in ("rational", "tangential"):
            for n in range(1, 4):
                if c.genus == 2 and n == 3:
                    p, _ = pcr_symbolic(n, c, kind, log_extension(c, 3) if kind == "tangential" else None)
                    assert is_grouplike(p), f"pcr group-like g=2 n=3 {kind}"
                    continue
                p, _ = pcr_symbolic(n, c, kind, ext if kind == "tangential" else None)
                assert is_grouplike(p), f"pcr group-like g={c.genus} n={n} {kind}"
                assert is_primitive(period_map(n, c, kind, ext).u_tensor), f"u primitive g={c.genus} n={n}"
    # (b) exp/log inverses and the bialgebra axiom
    shapes = [(1, 4), (2, 3), (2, 2), (1, 3)]
    for _ in range(200):
        g, n = rng.choice(shapes)
        a = _random_element(rng, g, n, zero_constant=True)
        assert log_trunc(exp_trunc(a)) == a, "log(exp(a)) == a"
        b = TensorElem.one(n, g) + a
        assert exp_trunc(log_trunc(b)) == b, "exp(log(1+a)) == 1+a"
        x, y = _random_element(rng, g, n), _random_element(rng, g, n)
        assert coproduct(concat_mul(x, y)) == tensor_mul(coproduct(x), coproduct(y), g), "bialgebra"
    # (c) conditions pass on computed generators and fail under a unit perturbation
    cases = [(EC, 4, Basepoint(Fraction(2), Fraction(3))), (EC_ALT, 4, Basepoint(Fraction(1), Fraction(1))),
             (EC, 4, Basepoint(tangential=True)), (HEC, 2, Basepoint(Fraction(0), Fraction(1)))]
    for f, n, bp in cases:
        c = curve_new(f)
        ext = log_extension(c, n)
        for m in range(1, n + 1):
            gens = hodge_f0(c, m, bp, ext)
            assert not check_conditions_Im(gens, ext)["failures"], f"conditions {f} level {m}"
            for key in sorted(gens.a):
                for length in range(key[0] + 1, m + 1):
                    for rank in range(1, (2 * c.genus) ** length + 1):
                        broken = HodgeGenerators(gens.curve, gens.level, gens.basepoint,
                                                 {k: dict(v) for k, v in gens.a.items()},
                                                 {k: dict(v) for k, v in gens.b.items()})
                        table = broken.a[key]
                        table[(length, rank)] = table.get((length, rank), c.zero()) + 1
                        assert check_conditions_Im(broken, ext)["failures"], \
                            f"unit perturbation of {key} at {(length, rank)} undetected"
    # (d) log poles on every extended connection, not on the raw ones
    for f, n in ((EC, 4), (EC_ALT, 3), (HEC, 2)):
        c = curve_new(f)
        ext = log_extension(c, n)
        for m in range(1, n + 1):
            assert verify_log_poles(ext.connection(m))[0], f"extended connection {f} level {m}"
            assert not verify_log_poles(universal_conn_matrix(c, m))[0], f"raw connection {f} level {m}"
    # (e) exactness and shuffle multiplicativity of regularized integrals
    for _ in range(100):
        z = _random_point(rng)
        G = LaurentSeries(0, [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(1, 6))])
        assert tangential_value([G.derivative()], z) == G.evaluate(z) - G[0], "exactness"
    for _ in range(100):
        z = _random_point(rng)
        forms = [_random_series(rng, -1) for _ in range(rng.randint(2, 4))]
        cut = rng.randint(1, len(forms) - 1)
        labels = [f"w{i}" for i in range(len(forms))]
        table = dict(zip(labels, forms))
        value = lambda word: tangential_value([table[x] for x in word], z)
        u, v = tuple(labels[:cut]), tuple(labels[cut:])
        total = LogPolynomial()
        for w, mult in shuffle_words(u, v).items():
            total = total + value(w) * mult
        assert value(u) * value(v) == total, "shuffle multiplicativity"


_SCALING_SCRIPT = """
import json, resource, time
from albanese.connext import log_extension, verify_log_poles
from albanese.exactalg import curve_new
start = time.perf_counter()
ext = log_extension(curve_new([1, 0, 0, 0, 0, 1]), 3)
conn = ext.connection()
elapsed = time.perf_counter() - start
ok = verify_log_poles(conn)[0]
peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
print(json.dumps({"dim": conn.dim, "seconds": elapsed, "peak_bytes": peak, "log_poles": ok}))
"""


@criterion(7, "genus 2 level 3 extension scaling", 60.0)
def test_criterion_7_scaling():
    proc = subprocess.run([sys.executable, "-c", _SCALING_SCRIPT], capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr[-500:]
    stats = json.loads(proc.stdout)
    assert stats["dim"] == 85, f"dimension {stats['dim']}"
    assert stats["log_poles"], "extended connection lacks log poles"
    assert stats["seconds"] < 60, f"{stats['seconds']:.1f}s"
    assert stats["peak_bytes"] < 2 ** 30, f"peak memory {stats['peak_bytes'] / 2 ** 20:.0f} MiB"
