"""End-to-end acceptance suite.

Each test prints one PASS/FAIL line per checked criterion (run with -s to
see them).  Expected values are frozen from the upstream reference table;
two entries of that table disagree with the relation-checked results and
the corresponding tests report the discrepancy honestly instead of hiding
it (see the adjacent *_verified tests, which pin the values that satisfy
the defining identities).
"""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from oracles import languages_agree, sylvester_resultant
from pisotcoding import (
    HomoclinicSpec,
    NotUnimodular,
    Window,
    b_matrix,
    beta_expand,
    build_automaton,
    check_finitarity,
    check_weak_finitarity,
    companion_matrix,
    conjugacy_certificate,
    d_sequence,
    enumerate_admissible_words,
    enumerate_z_beta,
    expansion_value,
    form_eval,
    form_expand,
    injectivity_experiment,
    is_admissible,
    kernel_sequences,
    make_field,
    max_entropy_chain,
    nn_sequence,
    phi_eval,
    predicted_preimage_count,
    search_unimodular,
    spans_lattice,
    tail_invariance_experiment,
    validate_weak_finitarity,
    value_of,
)
from pisotcoding.forms import classify_power_conjugacy, mat, mat_det, mat_mul, mat_vec
from pisotcoding.numeration import _tracker, canonical_expansion


def _report(name, ok, detail=""):
    line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    return ok


# frozen closed forms from the reference table (coordinates over 1, b, b^2, ...)
XI0_TABLE = {
    (1, 1): (Fraction(-1, 5), Fraction(2, 5)),
    (1, 1, 1): (Fraction(1, 22), Fraction(9, 22), Fraction(-4, 22)),
    (3, 4, 1): (Fraction(-13, 7), Fraction(-21, 7), Fraction(6, 7)),
}
# quartic entry as printed upstream, and the value satisfying xi0*g'(beta)=1
XI0_QUARTIC_PRINTED = (Fraction(-12, 283), Fraction(-16, 283), Fraction(73, 283), Fraction(9, 283))
XI0_QUARTIC_VERIFIED = (Fraction(-16, 283), Fraction(73, 283), Fraction(3, 283), Fraction(-12, 283))

M5 = mat([[1, 1, 0], [2, 3, 1], [1, 1, 1]])
M5_B_PRINTED = ((1, 2, -1), (2, -1, 0), (1, -1, 0))
M5_CUBIC_PRINTED = {
    (3, 0, 0): 1,
    (2, 0, 1): 2,
    (1, 2, 0): -1,
    (1, 1, 1): -1,
    (1, 0, 2): 3,
    (0, 3, 0): 1,
    (0, 2, 1): -3,
    (0, 1, 2): 2,
    (0, 0, 3): 1,
}


def _pisot_unit_fields(limit, max_degree=5, seed=0):
    """Deterministic scan over small coefficient vectors."""
    out = []
    rng = random.Random(seed)
    shapes = []
    for m in range(2, max_degree + 1):
        for _ in range(400):
            k = [rng.randint(-3, 3) for _ in range(m - 1)] + [rng.choice([-1, 1])]
            if k[0] <= 0:
                k[0] = rng.randint(1, 3)
            shapes.append(tuple(k))
    seen = set()
    for k in shapes:
        if k in seen:
            continue
        seen.add(k)
        try:
            field = make_field(list(k))
        except Exception:
            continue
        out.append(field)
        if len(out) == limit:
            break
    return out


def _unimodular_inverse(A):
    m = len(A)
    det = mat_det(A)
    assert abs(det) == 1
    cof = [
        [
            (-1) ** (i + j)
            * mat_det(tuple(tuple(A[r][c] for c in range(m) if c != j) for r in range(m) if r != i))
            for j in range(m)
        ]
        for i in range(m)
    ]
    adj = tuple(tuple(cof[j][i] for j in range(m)) for i in range(m))
    return tuple(tuple(x * det for x in row) for row in adj)


def _random_unimodular(rng, m, steps=5, bound=2):
    A = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    for _ in range(steps):
        i, j = rng.sample(range(m), 2)
        c = rng.randint(-bound, bound)
        for col in range(m):
            A[i][col] += c * A[j][col]
    return mat(A)


# -- criterion 1: xi0 closed forms ------------------------------------------------


def test_c01_xi0_closed_forms():
    ok = True
    for k, coords in XI0_TABLE.items():
        t0 = time.time()
        field = make_field(list(k))
        got = field.xi0.coords
        dt = time.time() - t0
        ok &= _report(
            f"criterion-01 xi0 k={k}",
            got == coords and dt < 1.0,
            f"{dt * 1000:.0f} ms",
        )
    assert ok


def test_c01_xi0_quartic_verified():
    t0 = time.time()
    field = make_field([1, 0, 0, 1])
    dt = time.time() - t0
    ok = field.xi0.coords == XI0_QUARTIC_VERIFIED
    ok &= (field.xi0 * field.g_prime_beta()) == field.one
    ok &= field.norm(field.xi0) * field.discriminant_D == 1
    ok &= dt < 1.0
    assert _report("criterion-01 xi0 k=(1,0,0,1) identity-checked value", ok)


def test_c01_xi0_quartic_printed_value():
    # frozen reference-table entry; disagrees with the value forced by
    # xi0 * g'(beta) = 1 (see the identity-checked test above and the notes)
    field = make_field([1, 0, 0, 1])
    ok = field.xi0.coords == XI0_QUARTIC_PRINTED
    _report("criterion-01 xi0 k=(1,0,0,1) printed table entry", ok)
    assert ok, (
        "printed entry (-12-16b+73b^2+9b^3)/283 fails xi0*g'(beta)=1; "
        f"the identity-checked value is {XI0_QUARTIC_VERIFIED}"
    )


# -- criterion 2: N(xi0) * D = 1 on scanned fields ---------------------------------


def test_c02_norm_xi0_times_discriminant():
    fields = _pisot_unit_fields(20)
    assert len(fields) == 20
    ok = all(f.norm(f.xi0) * f.discriminant_D == 1 for f in fields)
    assert _report("criterion-02 N(xi0)*D=1 on 20 scanned unit fields", ok)


# -- criterion 3: quartic Z_beta and weak finitarity -------------------------------


def test_c03_quartic_zbeta_and_certificate(quartic, quartic_cert):
    t0 = time.time()
    zb = enumerate_z_beta(quartic)
    expected = {quartic.zero}
    for k in range(2, 7):
        expected.add(quartic.pow_beta(-k) + quartic.pow_beta(-k - 1))
    ok_set = {a for a, _ in zb} == expected
    cert = quartic_cert
    ok_cert = cert.status == "proven" and len(cert.records) == 5
    ok_valid = validate_weak_finitarity(quartic, cert) == []
    # the period-block repair mechanism: the top class is repaired by the
    # pure power (beta^-5)^4, all windows are beta^-5-scaled
    top = max(cert.records, key=lambda r: quartic.float_value(r.alpha))
    ok_witness = value_of(quartic, top.f_word) == quartic.pow_beta(-20)
    ok_witness &= all(r.period % 5 == 0 for r in cert.records)
    dt = time.time() - t0
    ok = ok_set and ok_cert and ok_valid and ok_witness and dt < 10.0
    assert _report(
        "criterion-03 quartic Z_beta set and weak-finitarity certificate",
        ok,
        f"six classes={ok_set}, proven={ok_cert}, revalidated={ok_valid}, {dt:.1f} s",
    )


# -- criterion 4: non-finitarity of x^2 = 3x - 1 -----------------------------------


def test_c04_phi_squared_not_finitary(phi_squared):
    x = phi_squared.one - phi_squared.pow_beta(-1)
    exp = beta_expand(x)
    ok = exp == canonical_expansion((), (1,))
    res = check_finitarity(phi_squared)
    ok &= res.status == "not_finitary"
    assert _report("criterion-04 x^2=3x-1 purely periodic 1-1/b and not finitary", ok)


# -- criterion 5: finitarity flags --------------------------------------------------


def test_c05_finitary_fields(tribonacci, cubic341):
    ok = True
    for field, name in ((tribonacci, "tribonacci"), (cubic341, "cubic341")):
        t0 = time.time()
        res = check_finitarity(field)
        dt = time.time() - t0
        good = res.status == "finitary" and len(res.z_beta) == 1 and dt < 10.0
        ok &= _report(f"criterion-05 {name} finitary", good, f"{dt:.1f} s")
    assert ok


# -- criterion 6: degree-3 example form, search, certificate -----------------------


def test_c06a_form_expansion_up_to_global_sign():
    expansion = dict(form_expand(M5))
    same_monomials = set(expansion) == set(M5_CUBIC_PRINTED)
    global_sign = {expansion[e] * M5_CUBIC_PRINTED[e] < 0 for e in expansion} == {True}
    exact_negative = expansion == {e: -c for e, c in M5_CUBIC_PRINTED.items()}
    ok = same_monomials and global_sign and exact_negative
    assert _report(
        "criterion-06a nine-monomial cubic reproduced up to the form's +- sign",
        ok,
        "det B realizes the exact negative of the printed cubic",
    )


def test_c06b_search_finds_unit_vector():
    sols = search_unimodular(M5, 1)
    ok = any(n == (1, 0, 0) for n, _ in sols)
    assert _report("criterion-06b search at height 1 finds (1,0,0)", ok)


def test_c06c_b_matrix_printed_value():
    B = b_matrix(M5, (1, 0, 0))
    ok = B == M5_B_PRINTED
    _report("criterion-06c B(1,0,0) equals printed table entry", ok)
    assert ok, (
        f"computed B = {B} differs from the printed {M5_B_PRINTED} in entries "
        "(1,2) and (1,3); the printed matrix fails B M_beta = M B while the "
        "computed one satisfies it (see criterion-06d and the notes)"
    )


def test_c06d_certificate_relation():
    B = conjugacy_certificate(M5, (1, 0, 0))
    comp = companion_matrix((5, -4, 1))
    ok = mat_mul(B, comp) == mat_mul(M5, B) and abs(mat_det(B)) == 1
    printed_holds = mat_mul(M5_B_PRINTED, comp) == mat_mul(M5, M5_B_PRINTED)
    assert _report(
        "criterion-06d B*M_beta = M*B and |det B| = 1",
        ok and not printed_holds,
        "computed B satisfies the relation; the printed matrix does not",
    )


# -- criterion 7: power factors ------------------------------------------------------


def test_c07_power_factors(tribonacci):
    seq = nn_sequence(tribonacci, 5)
    ok = seq[1:] == [2, -1, -8, 29]
    count = 0
    for k1 in range(1, 8):
        for k2 in range(-4, 5):
            for k3 in (-1, 1):
                try:
                    field = make_field([k1, k2, k3])
                except Exception:
                    continue
                ok &= nn_sequence(field, 2)[1] == k1 * k2 + k3
                count += 1
    ok &= count >= 50
    assert _report(
        "criterion-07 tribonacci factors (2,-1,-8,29) and m=3 identity k1k2+k3",
        ok,
        f"{count} cubic unit fields checked",
    )


# -- criterion 8: m=2 power classification -------------------------------------------


def test_c08_m2_classification():
    rng = random.Random(42)
    quad_ks = []
    for k1 in range(1, 7):
        for k2 in (-1, 1):
            try:
                make_field([k1, k2])
            except Exception:
                continue
            quad_ks.append((k1, k2))
    mats = []
    while len(mats) < 100:
        k = quad_ks[rng.randrange(len(quad_ks))]
        C = _random_unimodular(rng, 2)
        Ci = _unimodular_inverse(C)
        M = mat_mul(mat_mul(C, companion_matrix(k)), Ci)
        mats.append((M, k))
    ok = True
    for M, k in mats:
        tr = M[0][0] + M[1][1]
        res2 = classify_power_conjugacy(M, 2, base_height=40)
        ok &= (res2.status == "conjugate") == (abs(tr) == 1)
        for n in (3, 4):
            ok &= classify_power_conjugacy(M, n, base_height=40).status == "not_conjugate"
    assert _report(
        "criterion-08 m=2: square conjugate exactly when |trace| = 1, higher powers never",
        ok,
        "100 random conjugated unit matrices",
    )


# -- criterion 9: equivalence of the three predicates ---------------------------------


def test_c09_equivalence_m3():
    rng = random.Random(7)
    cubic_ks = []
    for k1 in range(1, 6):
        for k2 in range(-3, 4):
            for k3 in (-1, 1):
                try:
                    make_field([k1, k2, k3])
                except Exception:
                    continue
                cubic_ks.append((k1, k2, k3))
    ok = True
    checked = 0
    while checked < 50:
        k = cubic_ks[rng.randrange(len(cubic_ks))]
        C = _random_unimodular(rng, 3)
        Ci = _unimodular_inverse(C)
        M = mat_mul(mat_mul(C, companion_matrix(k)), Ci)
        n = tuple(rng.randint(-3, 3) for _ in range(3))
        if not any(n):
            continue
        unimodular = abs(form_eval(M, n)) == 1
        try:
            conjugacy_certificate(M, n)
            has_cert = True
        except NotUnimodular:
            has_cert = False
        spans = spans_lattice(M, n)
        ok &= unimodular == has_cert == spans
        checked += 1
    assert _report(
        "criterion-09 |f|=1 <=> certificate <=> lattice span on 50 random (M, n)",
        ok,
    )


# -- criterion 10: preimage counts -----------------------------------------------------


def test_c10_preimage_counts(golden, tribonacci, cubic341, quartic):
    ok = True
    for f in (golden, tribonacci, cubic341, quartic):
        ok &= predicted_preimage_count(HomoclinicSpec(f, f.xi0)) == 1
    ok &= predicted_preimage_count(HomoclinicSpec(golden, golden.one)) == 5
    fields = _pisot_unit_fields(10, seed=3)
    for f in fields:
        count = predicted_preimage_count(HomoclinicSpec(f, f.one))
        res = sylvester_resultant(f.min_poly.g_coeffs(), f.min_poly.g_derivative())
        ok &= count == abs(f.discriminant_D) == abs(res)
    assert _report(
        "criterion-10 counts: 1 for fundamental, 5 for golden xi=1, |D| vs resultant oracle",
        ok,
    )


# -- criterion 11: kernel sequences map to zero ----------------------------------------


def test_c11_kernel_maps_to_zero(quartic):
    spec = HomoclinicSpec(quartic, quartic.xi0)
    ok = True
    for exp in kernel_sequences(quartic):
        if exp.is_finite:
            continue
        pt = phi_eval(spec, exp, 1e-8)
        dist = max(min(c, 1 - c) for c in pt.coords) + pt.error_radius
        ok &= dist <= 1e-8
    assert _report("criterion-11 kernel sequences within 1e-8 of zero", ok)


# -- criterion 12: statistical suites ---------------------------------------------------


def test_c12_injectivity_fundamental(golden, golden_cert):
    t0 = time.time()
    spec = HomoclinicSpec(golden, golden.xi0)
    rep = injectivity_experiment(
        spec, n_digits=30, trials=10 ** 4, resolution=2.0 ** -20, seed=7, certificate=golden_cert
    )
    dt = time.time() - t0
    ok = rep.collision_histogram == {1: 10 ** 4}
    ok &= rep.counterexamples == () and rep.entropy_ok
    ok &= dt < 150
    assert _report(
        "criterion-12 injectivity: zero non-kernel collisions in 1e4 trials at 2^-20",
        ok,
        f"{dt:.1f} s",
    )


def test_c12_injectivity_xi_one_mode(golden, golden_cert):
    t0 = time.time()
    spec = HomoclinicSpec(golden, golden.one)
    rep = injectivity_experiment(
        spec, n_digits=48, trials=400, resolution=2.0 ** -20, seed=11, certificate=golden_cert
    )
    dt = time.time() - t0
    ok = rep.mode_multiplicity == 5 and not rep.counterexamples and dt < 120
    assert _report(
        "criterion-12 injectivity: xi=1 collision multiplicity mode is 5",
        ok,
        f"histogram {rep.collision_histogram}, {dt:.1f} s",
    )


@pytest.fixture(scope="module")
def tail_report(quartic, quartic_cert):
    return tail_invariance_experiment(
        quartic, n_list=[20, 40, 60], trials=2000, seed=5, certificate=quartic_cert
    )


def test_c12_tail_monotone(tail_report):
    by_n = {}
    for n, alpha, frac, trials in tail_report.rows:
        if alpha == "0":
            continue
        by_n.setdefault(n, []).append(frac)
    means = {n: sum(v) / len(v) for n, v in by_n.items()}
    sigma = math.sqrt(0.25 / 2000)
    ok = means[40] >= means[20] - 2 * sigma and means[60] >= means[40] - 2 * sigma
    zero_rows = [r for r in tail_report.rows if r[1] == "0"]
    ok &= all(r[2] == 1.0 for r in zero_rows)
    assert _report(
        "criterion-12 tails: non-decreasing in n within 2 sigma, alpha=0 exactly 1",
        ok,
        f"means {means[20]:.3f} -> {means[40]:.3f} -> {means[60]:.3f}",
    )


def test_c12_tail_level_at_60(tail_report):
    # frozen threshold from the reference table (geometric-decay constant
    # there is only bounded, not computed); the measured per-digit rate for
    # this field is ~0.985, so the level is reached near n ~ 100 instead
    fr = [r[2] for r in tail_report.rows if r[0] == 60 and r[1] != "0"]
    level = min(fr)
    ok = level >= 0.9
    _report("criterion-12 tails: unchanged fraction >= 0.9 at n=60", ok, f"min {level:.3f}")
    assert ok, (
        f"minimum unchanged fraction at n=60 is {level:.3f}; the fraction does "
        "converge to 1 (>= 0.9 from n ~ 100, see the supplementary test)"
    )


def test_c12_tail_level_supplementary(quartic, quartic_cert):
    rep = tail_invariance_experiment(
        quartic, n_list=[100, 140], trials=600, seed=5, certificate=quartic_cert
    )
    by_n = {}
    for n, alpha, frac, trials in rep.rows:
        if alpha == "0":
            continue
        by_n.setdefault(n, []).append(frac)
    ok = min(by_n[100]) >= 0.85 and min(by_n[140]) >= 0.9 and (
        sum(by_n[100]) / len(by_n[100]) >= 0.9
    )
    assert _report(
        "criterion-12 tails: level reached at larger n (mean >= 0.9 at n=100)",
        ok,
        f"mean(100)={sum(by_n[100]) / len(by_n[100]):.3f}, mean(140)={sum(by_n[140]) / len(by_n[140]):.3f}",
    )


# -- criterion 13: invariant suites -----------------------------------------------------


def test_c13_greedy_roundtrip(golden, tribonacci, quartic, phi_squared):
    rng = random.Random(19)
    ok = True
    for field in (golden, tribonacci, quartic, phi_squared):
        done = 0
        while done < 60:
            x = field.element(
                [Fraction(rng.randint(-30, 30), rng.randint(1, 8)) for _ in range(field.m)]
            )
            if field.sign(x) < 0 or not (x < field.one):
                continue
            ok &= expansion_value(field, beta_expand(x)) == x
            done += 1
    assert _report("criterion-13 greedy round-trip on random field elements", ok)


def test_c13_glue_padding(golden, tribonacci, quartic, phi_squared, cubic341):
    rng = random.Random(23)
    ok = True
    for field in (golden, tribonacci, quartic, phi_squared, cubic341):
        ds = d_sequence(field)
        words = enumerate_admissible_words(field, 6)
        for _ in range(1000):
            u = words[rng.randrange(len(words))]
            v = words[rng.randrange(len(words))]
            ok &= is_admissible(u + (0, 0, 0, 0) + v, ds)
    assert _report("criterion-13 four-zero glue on 1000 word pairs per field", ok)


def test_c13_automaton_agreement(golden, tribonacci, quartic, phi_squared, cubic341, plastic):
    ok = True
    for field, literal_len in (
        (golden, 12),
        (quartic, 12),
        (plastic, 12),
        (tribonacci, 12),
        (phi_squared, 10),
        (cubic341, 6),
    ):
        ds = d_sequence(field)
        auto = build_automaton(ds)
        # complete language equality, every word length at once
        ok &= languages_agree(auto, _tracker(field)) is None
        for n in range(1, literal_len + 1):
            for word in itertools.product(range(ds.floor_beta + 1), repeat=n):
                ok &= auto.accepts(word) == is_admissible(word, ds)
            if not ok:
                break
    assert _report(
        "criterion-13 automaton/admissibility agreement (product proof + literal enumeration)",
        ok,
    )


def test_c13_entropy_match(golden, tribonacci, quartic, phi_squared, cubic341):
    ok = True
    for field in (golden, tribonacci, quartic, phi_squared, cubic341):
        chain = max_entropy_chain(build_automaton(d_sequence(field)))
        ok &= abs(chain.entropy_rate() - math.log(chain.perron_value)) <= 1e-8
        ok &= abs(chain.perron_value - field.float_value(field.beta)) <= 1e-8
    assert _report("criterion-13 entropy rate equals log(beta) within 1e-8", ok)


def test_c13_phi_additivity_and_equivariance(golden):
    spec = HomoclinicSpec(golden, golden.xi0)
    M = companion_matrix(golden)
    ds = d_sequence(golden)
    rng = random.Random(31)
    ok = True
    checked = 0
    while checked < 25:
        digits = tuple(rng.randint(0, 1) for _ in range(12))
        if not is_admissible(digits, ds):
            continue
        p1 = phi_eval(spec, Window(0, digits), 1e-12)
        p2 = phi_eval(spec, Window(-1, digits), 1e-12)
        img = [sum(M[i][j] * p1.coords[j] for j in range(2)) % 1.0 for i in range(2)]
        for a, b in zip(img, p2.coords):
            d = abs(a - b)
            ok &= min(d, 1 - d) < 1e-9
        checked += 1
    # additivity on disjointly supported windows (no carries)
    w1 = Window(1, (1, 0, 0, 0, 0, 0))
    w2 = Window(7, (1, 0, 1))
    ws = Window(1, (1, 0, 0, 0, 0, 0, 1, 0, 1))
    v1 = phi_eval(spec, w1, 1e-12)
    v2 = phi_eval(spec, w2, 1e-12)
    vs = phi_eval(spec, ws, 1e-12)
    for i in range(2):
        d = abs((v1.coords[i] + v2.coords[i]) % 1.0 - vs.coords[i])
        ok &= min(d, 1 - d) < 1e-9
    assert _report("criterion-13 coding shift-equivariance and additivity", ok)
