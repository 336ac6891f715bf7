import random

import pytest

from helpers import ScenarioChecker
from todx import (DuplicateEqualityError, IndexMode, MalformedEqualityError,
                  PostOrderingIndex, Substitution, UnknownEqualityError,
                  canonicalize_equality)


@pytest.fixture
def swap_setup(sig):
    x, y = sig.var(0), sig.var(1)
    l = sig.app("f", [x, y])
    return l, sig.app("f", [y, x]), sig.app("f", [x, x])


def make_index(sig, mode, order="kbo"):
    return PostOrderingIndex(sig, order, mode)


def test_shared_mode_one_group_one_tod(sig, swap_setup):
    l, r1, r2 = swap_setup
    idx = make_index(sig, "shared")
    idx.insert(l, r1)
    idx.insert(l, r2)
    st = idx.snapshot_stats()
    assert st.tods == 1 and st.demodulators == 2
    assert len(idx.tods()) == 1
    assert sum(n.kind.value == "success" for n in idx.tods()[0].nodes()) == 2


def test_per_equality_mode_two_tods(sig, swap_setup):
    l, r1, r2 = swap_setup
    idx = make_index(sig, "on")
    idx.insert(l, r1)
    idx.insert(l, r2)
    assert idx.snapshot_stats().tods == 2
    assert len(idx.tods()) == 2


def test_alpha_renamed_lhs_lands_in_same_group(sig, swap_setup):
    l, r1, _ = swap_setup
    idx = make_index(sig, "shared")
    idx.insert(l, r1)
    u, v = sig.var(7), sig.var(8)
    with pytest.raises(DuplicateEqualityError):
        idx.insert(sig.app("f", [u, v]), sig.app("f", [v, u]))
    assert len(idx.groups()) == 1


def test_duplicate_live_pair_rejected(sig, swap_setup):
    l, r1, _ = swap_setup
    idx = make_index(sig, "off")
    idx.insert(l, r1)
    with pytest.raises(DuplicateEqualityError):
        idx.insert(l, r1)


def test_deleted_pair_can_be_reinserted(sig, swap_setup):
    l, r1, _ = swap_setup
    idx = make_index(sig, "shared")
    e1 = idx.insert(l, r1)
    idx.remove(e1)
    e2 = idx.insert(l, r1)
    assert e2 != e1
    a = sig.app("a")
    sigma = Substitution({0: sig.app("f", [a, a]), 1: a})
    assert idx.query(l, sigma) == [e2]


def test_rhs_with_fresh_variables_rejected(sig):
    x, z = sig.var(0), sig.var(5)
    with pytest.raises(MalformedEqualityError):
        make_index(sig, "off").insert(sig.app("g", [x]), sig.app("f", [x, z]))


def test_remove_unknown_and_idempotent(sig, swap_setup):
    l, r1, _ = swap_setup
    idx = make_index(sig, "shared")
    e1 = idx.insert(l, r1)
    created = idx.snapshot_stats().nodes_created
    idx.remove(e1)
    idx.remove(e1)
    st = idx.snapshot_stats()
    assert st.demodulators == 0
    assert st.nodes_created == created  # lazy deletion leaves the diagram alone
    with pytest.raises(UnknownEqualityError):
        idx.remove(999)


def test_query_unknown_lhs_is_empty(sig, swap_setup):
    l, r1, _ = swap_setup
    idx = make_index(sig, "shared")
    idx.insert(l, r1)
    before = idx.snapshot_stats().queries
    assert idx.query(sig.app("g", [sig.var(0)]), Substitution()) == []
    assert idx.snapshot_stats().queries == before


def test_query_extra_bindings_ignored(sig, swap_setup):
    l, r1, _ = swap_setup
    idx = make_index(sig, "off")
    e1 = idx.insert(l, r1)
    a = sig.app("a")
    sigma = Substitution({0: sig.app("f", [a, a]), 1: a, 9: sig.app("b")})
    assert idx.query(l, sigma) == [e1]


def test_query_with_renamed_lhs(sig, swap_setup):
    # querying with an alpha-variant of the stored lhs remaps the bindings
    l, r1, _ = swap_setup
    idx = make_index(sig, "shared")
    e1 = idx.insert(l, r1)
    u, v = sig.var(3), sig.var(4)
    a = sig.app("a")
    sigma = Substitution({3: sig.app("f", [a, a]), 4: a})
    assert idx.query(sig.app("f", [u, v]), sigma) == [e1]


def test_documented_query_verdicts(sig, swap_setup):
    l, r1, r2 = swap_setup
    a = sig.app("a")
    faa = sig.app("f", [a, a])
    for mode in ("off", "on", "shared"):
        idx = make_index(sig, mode)
        e1 = idx.insert(l, r1)
        e2 = idx.insert(l, r2)
        assert idx.query(l, Substitution({0: a, 1: faa})) == [e2]
        assert idx.query(l, Substitution({0: a, 1: a})) == []
        assert idx.query(l, Substitution({0: faa, 1: a})) == [e1]
        assert idx.query(l, Substitution({0: faa, 1: a}), want="first") == [e1]


def test_first_mode_is_prefix_of_all(sig, swap_setup):
    l, r1, r2 = swap_setup
    rng = random.Random(4)
    from helpers import random_subst
    for mode in ("off", "on", "shared"):
        idx = make_index(sig, mode)
        idx.insert(l, r1)
        idx.insert(l, r2)
        for _ in range(40):
            sigma = random_subst(rng, sig, [0, 1], 3)
            assert idx.query(l, sigma, "first") == idx.query(l, sigma)[:1]


def test_stats_zero_after_construction(sig):
    st = make_index(sig, "shared").snapshot_stats()
    assert st.queries == st.answers == st.demodulators == st.tods == 0
    assert st.nodes_created.total == 0


def test_stats_after_one_insert(sig, swap_setup):
    l, r1, _ = swap_setup
    idx = make_index(sig, "shared")
    idx.insert(l, r1)
    st = idx.snapshot_stats()
    assert st.tods == 1 and st.demodulators == 1
    assert st.nodes_created.term == 1 and st.nodes_created.success == 1
    assert st.nodes_created.pos == 0


def test_queries_counter_increments(sig, swap_setup):
    l, r1, _ = swap_setup
    idx = make_index(sig, "shared")
    idx.insert(l, r1)
    a = sig.app("a")
    idx.query(l, Substitution({0: a, 1: a}))
    idx.query(l, Substitution({0: a, 1: a}))
    assert idx.snapshot_stats().queries == 2


def test_snapshot_is_independent(sig, swap_setup):
    l, r1, _ = swap_setup
    idx = make_index(sig, "shared")
    idx.insert(l, r1)
    snap = idx.snapshot_stats()
    idx.query(l, Substitution({0: sig.app("a"), 1: sig.app("a")}))
    assert snap.queries == 0
    assert idx.snapshot_stats().queries == 1


def test_answers_match_results_plus_exits(sig, swap_setup):
    l, r1, r2 = swap_setup
    idx = make_index(sig, "shared")
    idx.insert(l, r1)
    idx.insert(l, r2)
    a, b = sig.app("a"), sig.app("b")
    faa = sig.app("f", [a, a])
    total_results = 0
    exits = 0
    for sigma in (Substitution({0: faa, 1: a}), Substitution({0: a, 1: a}),
                  Substitution({0: b, 1: a}), Substitution({0: faa, 1: b})):
        total_results += len(idx.query(l, sigma))
        exits += 1  # "all" mode always runs to the exit
    assert idx.snapshot_stats().answers == total_results + exits


def test_mode_agreement_random(sig):
    for seed in range(120):
        rng = random.Random(seed)
        checker = ScenarioChecker(rng, rng.choice(["kbo", "lpo"]))
        checker.insert_random()
        for _ in range(14):
            checker.random_op()


def test_query_idempotent_on_state(sig, swap_setup):
    l, r1, r2 = swap_setup
    for mode in ("on", "shared"):
        idx = make_index(sig, mode)
        idx.insert(l, r1)
        idx.insert(l, r2)
        a = sig.app("a")
        sigma = Substitution({0: sig.app("f", [a, a]), 1: a})
        first = idx.query(l, sigma)
        processed = idx.snapshot_stats().nodes_processed.total
        assert idx.query(l, sigma) == first
        assert idx.snapshot_stats().nodes_processed.total == processed


def test_canonicalize_equality_numbering(sig):
    u, v = sig.var(5), sig.var(9)
    lhs = sig.app("f", [v, u])
    rhs = sig.app("f", [u, v])
    l_c, r_c, mapping = canonicalize_equality(sig, lhs, rhs)
    assert l_c is sig.app("f", [sig.var(0), sig.var(1)])
    assert r_c is sig.app("f", [sig.var(1), sig.var(0)])
    assert mapping == {9: 0, 5: 1}


def test_index_mode_parse():
    assert IndexMode.parse("off") is IndexMode.OFF
    assert IndexMode.parse("on") is IndexMode.PER_EQUALITY
    assert IndexMode.parse("shared") is IndexMode.SHARED_BY_LHS
    with pytest.raises(ValueError):
        IndexMode.parse("both")
