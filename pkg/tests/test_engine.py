"""Production table engine: strategy, symmetry, checkpoints, audits."""
from __future__ import annotations

import pytest

from conftest import REFERENCE_TABLES
from polybetti.engine import (CheckpointStore, EngineOptions, Kp1Report,
                              TableAborted, _bidegree_actions, betti_table,
                              block_dimensions, compute_b, compute_c,
                              effective_plans, options_key, orbit_reduce,
                              plan_strategy, polygon_key, run_audits,
                              strand_value, support_region_check, verify_kp1,
                              verify_prune_monotonicity)
from polybetti.koszul import (EMPTY_PLAN, SupportTriple, enumerate_basis,
                              linear_strand_spec, middle_profile,
                              total_middle)
from polybetti.linalg import ComputeBudget, PrimeModulus
from polybetti.polygon import (AffineUnimodularMap, from_vertices,
                               named_polygon, parse_polygon)


def mapped(poly, matrix, shift):
    phi = AffineUnimodularMap(matrix, shift)
    return from_vertices([phi(v) for v in poly.vertices])

FAST_MODELS = ["Sigma", "Upsilon", "2*Sigma", "Upsilon_2", "3*Sigma",
               "2*Upsilon", "Upsilon_3"]


@pytest.mark.parametrize("name", FAST_MODELS)
def test_tables_match_frozen_models(name, prime, serial_options):
    poly = named_polygon(name)
    table = betti_table(poly, prime, serial_options)
    b, c = REFERENCE_TABLES[name]
    assert table.b == b
    assert table.c == c
    assert table.n == poly.n_points
    assert table.prime == prime


def test_integer_prime_argument_is_accepted(serial_options):
    table = betti_table(named_polygon("Upsilon"), 40009, serial_options)
    assert (table.b, table.c) == ([0], [1])


def test_determinism_is_bit_identical(prime, serial_options):
    from polybetti.table import render_ascii, render_json
    poly = named_polygon("Upsilon_3")
    first = betti_table(poly, prime, serial_options)
    second = betti_table(poly, prime, serial_options)
    assert render_ascii(first) == render_ascii(second)
    assert render_json(first) == render_json(second)


def test_provenance_tags(prime, serial_options):
    en = betti_table(named_polygon("2*Sigma"), prime, serial_options)
    assert set(en.b_provenance) == {"eagon_northcott"}
    assert set(en.c_provenance) == {"zero_by_shape"}

    table = betti_table(named_polygon("3*Sigma"), prime, serial_options)
    assert table.b_provenance[6] == "zero_by_interior"          # b7 = 0
    for j in range(2, 8):                                       # c2..c7 = 0
        assert table.c_provenance[j - 1] == "zero_by_boundary_count"
    assert {"computed", "crossfilled"} & set(table.b_provenance
                                             + table.c_provenance)


@pytest.mark.parametrize("name", ["Upsilon_2", "2*Upsilon", "Upsilon_3"])
def test_rigor_flags_and_star_closure(name, prime, serial_options):
    poly = named_polygon(name)
    n = poly.n_points
    table = betti_table(poly, prime, serial_options)
    # a computed zero is exact, so no zero entry may be flagged modular
    for v, r in zip(table.b + table.c, table.b_rigorous + table.c_rigorous):
        if v == 0:
            assert r
    # rigor transfers across each antidiagonal in both directions
    for ell in range(1, n - 1):
        pb, pc = ell, n - 1 - ell
        rig_b = not (1 <= pb <= n - 3) or table.b_rigorous[pb - 1]
        rig_c = not (1 <= pc <= n - 3) or table.c_rigorous[pc - 1]
        assert rig_b == rig_c


def test_modular_entries_frozen(prime, serial_options):
    def stars(name):
        t = betti_table(named_polygon(name), prime, serial_options)
        return ({p for p, r in enumerate(t.b_rigorous, 1) if not r},
                {p for p, r in enumerate(t.c_rigorous, 1) if not r})

    assert stars("Upsilon_2") == ({3}, {3})
    assert stars("2*Upsilon") == ({5}, {4})
    assert stars("Upsilon_3") == ({4, 5, 6}, {4, 5, 6})
    assert stars("3*Sigma") == (set(), set())


def test_plan_strategy_shapes(prime):
    st = plan_strategy(named_polygon("2*Sigma"), prime)
    assert st.eagon_northcott
    assert set(st.choices.values()) == {"shortcut"}

    st = plan_strategy(named_polygon("3*Sigma"), prime)
    assert not st.eagon_northcott
    assert st.b_preset == {7: "zero_by_interior"}
    assert st.c_preset == {j: "zero_by_boundary_count" for j in range(2, 8)}
    assert set(st.choices) == set(range(1, 9))
    computed = {a for a, ch in st.choices.items() if ch != "shortcut"}
    for a in computed:
        key_b, key_c = ("b", a), ("c", 9 - a)
        assert key_b in st.estimates and key_c in st.estimates
        want = "compute_c" if (st.estimates[key_c]
                               <= st.estimates[key_b]) else "compute_b"
        assert st.choices[a] == want


def test_effective_plans_modes():
    tri = named_polygon("2*Sigma")
    square = parse_polygon("0,0 2,0 2,2 0,2")
    auto = EngineOptions()
    plan_b, plan_c = effective_plans(tri, auto)
    assert plan_b.certificate == plan_c.certificate == "triangle"
    assert effective_plans(square, auto) == (EMPTY_PLAN, EMPTY_PLAN)
    on = EngineOptions(removal="on")
    plan_b, plan_c = effective_plans(square, on)
    assert plan_b.certificate == plan_c.certificate == "opposite_pair"
    off = EngineOptions(removal="off")
    assert effective_plans(tri, off) == (EMPTY_PLAN, EMPTY_PLAN)


@pytest.mark.parametrize("name", ["Upsilon_2", "2*Upsilon"])
def test_removal_does_not_change_values(name, prime):
    poly = named_polygon(name)
    budget = ComputeBudget(max_workers=1)
    on = betti_table(poly, prime,
                     EngineOptions(removal="on", budget=budget))
    off = betti_table(poly, prime,
                      EngineOptions(removal="off", budget=budget))
    assert (on.b, on.c) == (off.b, off.c)


def test_symmetry_orbit_counts_frozen():
    poly = named_polygon("2*Sigma")
    spec = linear_strand_spec(poly, 1)
    prof = middle_profile(spec)
    bidegs = [ab for ab, v in prof.items() if v > 0]
    assert len(bidegs) == 15
    actions = _bidegree_actions(poly, EMPTY_PLAN, spec.translate_degree)
    assert len(actions) == 6
    orbits = orbit_reduce(bidegs, actions)
    assert sorted(size for _, size in orbits) == [3, 3, 3, 6]
    # orientation-preserving half only: five orbits of three
    from polybetti.polygon import symmetry_group
    rot = []
    for psi in symmetry_group(poly):
        (m00, m01), (m10, m11) = psi.matrix
        if m00 * m11 - m01 * m10 != 1:
            continue
        tx, ty = psi.shift
        td = spec.translate_degree
        rot.append(lambda ab, m00=m00, m01=m01, m10=m10, m11=m11,
                   dx=td * tx, dy=td * ty: (m00 * ab[0] + m01 * ab[1] + dx,
                                            m10 * ab[0] + m11 * ab[1] + dy))
    assert len(rot) == 3
    rot_orbits = orbit_reduce(bidegs, rot)
    assert sorted(size for _, size in rot_orbits) == [3, 3, 3, 3, 3]
    assert len(orbit_reduce(bidegs, [])) == 15


def test_symmetry_on_off_same_entries(prime):
    poly = named_polygon("Upsilon_2")
    budget = ComputeBudget(max_workers=1)
    for strand, ell in (("b", 2), ("c", 2)):
        fast = strand_value(poly, strand, ell, prime, EMPTY_PLAN,
                            use_symmetry=True, budget=budget)
        slow = strand_value(poly, strand, ell, prime, EMPTY_PLAN,
                            use_symmetry=False, budget=budget)
        assert fast.value == slow.value
        assert fast.bigraded == slow.bigraded


def test_bigraded_tables_and_support_windows(prime):
    poly = named_polygon("Upsilon_2")
    opts = EngineOptions(keep_bigraded=True,
                         budget=ComputeBudget(max_workers=1))
    table = betti_table(poly, prime, opts)
    assert table.bigraded
    for ell in range(1, 5):
        marg = sum(v for (s, e, _), v in table.bigraded.items()
                   if s == "b" and e == ell)
        if any(s == "b" and e == ell for (s, e, _) in table.bigraded):
            assert marg == table.b[ell - 1]
    report = support_region_check(poly, table)
    assert report.ok


def test_block_dimensions_match_enumeration():
    poly = named_polygon("Upsilon_2")
    spec = linear_strand_spec(poly, 2)
    blocks = block_dimensions(poly, "b", 2, EngineOptions(removal="off"))
    assert sum(cols for _, _, cols in blocks) == total_middle(spec)
    below = SupportTriple(spec.wedge_support, spec.right.target_support,
                          spec.right.target_support,
                          spec.right.wedge_degree - 1)
    for ab, rows, cols in blocks:
        assert cols == len(enumerate_basis(spec.right, ab))
        assert rows == len(enumerate_basis(below, ab))


def test_checkpoint_resume_and_refusal(tmp_path, prime):
    path = str(tmp_path / "run.jsonl")
    poly = named_polygon("Upsilon_2")
    budget = ComputeBudget(max_workers=1)
    opts = EngineOptions(checkpoint=path, budget=budget)
    first = betti_table(poly, prime, opts)
    n_lines = len(open(path).read().splitlines())
    assert n_lines > 1
    again = betti_table(poly, prime, opts)
    assert (again.b, again.c) == (first.b, first.c)
    assert len(open(path).read().splitlines()) == n_lines
    with pytest.raises(ValueError, match="different run"):
        betti_table(poly, PrimeModulus(3), opts)
    other = EngineOptions(checkpoint=path, removal="off", budget=budget)
    with pytest.raises(ValueError, match="different run"):
        betti_table(poly, prime, other)


def test_checkpoint_header_keys(tmp_path, prime):
    path = str(tmp_path / "hdr.jsonl")
    poly = named_polygon("Upsilon_2")
    opts = EngineOptions(checkpoint=path,
                         budget=ComputeBudget(max_workers=1))
    betti_table(poly, prime, opts)
    import json
    header = json.loads(open(path).readline())
    assert header == {"polygon": polygon_key(poly),
                      "prime": prime.p,
                      "options": options_key(prime, opts)}


def test_aborted_run_keeps_partials_and_resumes(tmp_path, prime):
    poly = named_polygon("Upsilon_3")
    path = str(tmp_path / "abort.jsonl")
    tight = EngineOptions(checkpoint=path,
                          budget=ComputeBudget(max_workers=1,
                                               memory_cap=5_000))
    with pytest.raises(TableAborted) as exc_info:
        betti_table(poly, prime, tight)
    exc = exc_info.value
    assert exc.checkpoint == path
    assert (exc.strand, exc.ell) == ("c", 6)
    assert exc.partial_b == {8: 0}
    assert exc.partial_c == {8: 0, 7: 0}
    relaxed = EngineOptions(checkpoint=path,
                            budget=ComputeBudget(max_workers=1))
    table = betti_table(poly, prime, relaxed)
    b, c = REFERENCE_TABLES["Upsilon_3"]
    assert (table.b, table.c) == (b, c)


def test_verify_kp1_spec_examples(prime, serial_options):
    report = verify_kp1(named_polygon("3*Sigma"), prime, serial_options)
    assert isinstance(report, Kp1Report)
    assert report.verdict == "holds"
    assert report.exceptional
    assert (report.predicted_from_right, report.first_zero_index) == (4, 7)
    assert report.entries[7] == (0, True)
    assert report.entries[6] == (27, True)

    report = verify_kp1(named_polygon("2*Upsilon"), prime, serial_options)
    assert report.verdict == "holds"
    assert report.first_zero_index == 6
    assert report.entries[6] == (0, True)
    assert report.entries[5][0] == 20

    square = parse_polygon("0,0 1,0 1,1 0,1")
    report = verify_kp1(square, prime, serial_options)
    assert report.verdict == "holds"
    assert (report.lattice_width, report.n) == (1, 4)
    assert report.predicted_from_right == 3
    assert report.first_zero_index == 2          # past the b1-only table
    assert report.entries[1] == (1, True)
    assert any("beyond the table edge" in note for note in report.notes)


def test_verify_kp1_accepts_int_prime(serial_options):
    report = verify_kp1(named_polygon("Upsilon_2"), 40009, serial_options)
    assert report.verdict == "holds"


def test_prune_monotonicity_reports(prime, serial_options):
    poly = named_polygon("2*Sigma")
    report = verify_prune_monotonicity(poly, (2, 0), prime, serial_options)
    assert report.ok
    assert report.vertex == (2, 0)


@pytest.mark.parametrize("name", ["Upsilon", "2*Sigma", "Upsilon_2"])
def test_run_audits_pass_on_models(name, prime, serial_options):
    assert run_audits(named_polygon(name), prime, serial_options) == []


def test_audits_cover_a_skewed_polygon(prime, serial_options):
    poly = mapped(named_polygon("Upsilon"), ((1, 2), (0, 1)), (3, -1))
    assert run_audits(poly, prime, serial_options) == []


def test_compute_entry_positions_out_of_strategy(prime):
    poly = named_polygon("Upsilon_2")
    budget = ComputeBudget(max_workers=1)
    b, c = REFERENCE_TABLES["Upsilon_2"]
    for ell in range(1, 5):
        assert compute_b(poly, ell, prime, budget=budget).value == b[ell - 1]
        assert compute_c(poly, ell, prime, budget=budget).value == c[ell - 1]


def test_polygon_key_is_class_invariant():
    poly = named_polygon("Upsilon_2")
    moved = mapped(poly, ((1, 1), (0, 1)), (-2, 5))
    assert polygon_key(poly) == polygon_key(moved)
    assert polygon_key(poly) != polygon_key(named_polygon("2*Sigma"))


def test_options_validation():
    with pytest.raises(ValueError):
        EngineOptions(removal="sometimes")
