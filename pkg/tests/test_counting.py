import pytest

from oracles import anti_involutive_graphs, symmetric_relations
from msl import counting
from msl.parser import parse


@pytest.mark.parametrize("n,value", [(1, 2), (2, 8), (3, 64), (4, 1024)])
def test_symmetric(n, value):
    assert counting.closed_form_symmetric(n) == value
    assert counting.count_models(counting.PHI_SYM, n) == value
    if n <= 3:
        assert symmetric_relations(n) == value


@pytest.mark.parametrize("n,value", [(1, 0), (2, 0), (3, 2), (4, 30), (5, 444), (6, 7360), (7, 138690)])
def test_anti_involutive_functions(n, value):
    assert counting.count_functions_anti_involutive(n) == value
    assert counting.closed_form_anti_involutive(n) == value


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_anti_involutive_sentence(n):
    assert counting.count_models(counting.PHI_AI, n) == counting.count_functions_anti_involutive(n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_anti_involutive_sentence_against_listing(n):
    assert counting.count_models(counting.PHI_AI, n) == anti_involutive_graphs(n)


def test_closed_forms_are_exact_integers():
    big = counting.closed_form_anti_involutive(30)
    assert isinstance(big, int) and big > 0
    assert counting.closed_form_symmetric(40) == 2 ** (40 * 39 // 2 + 40)


def test_contradiction_has_no_models():
    assert counting.count_models(parse("E x. ~(x=x)"), 3) == 0


def test_counting_needs_a_sentence():
    with pytest.raises(counting.CountingError):
        counting.count_models(parse("P(x)"), 2)


def test_search_space_cap():
    with pytest.raises(counting.CountingError):
        counting.count_models(counting.PHI_SYM, 5)
    with pytest.raises(counting.CountingError):
        counting.count_functions_anti_involutive(8)


def test_report_line():
    rep = counting.count_report(counting.PHI_AI, 3, "anti-involutive")
    assert rep.tsv() == "3\t2\t2\ttrue"
    assert counting.count_report(counting.PHI_SYM, 2).tsv() == "2\t8\t\t"


def test_workers_give_the_same_count(monkeypatch):
    monkeypatch.setenv("MSL_THREADS", "2")
    assert counting.count_models(counting.PHI_SYM, 4) == 1024
