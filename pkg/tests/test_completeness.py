import random

import pytest

from commentscore.completeness import completeness, completeness_go
from commentscore.corpus import Language
from commentscore.docparse import DocElements
from commentscore.docparse.comments import CommentDoc, ExceptionDoc, ParamDoc, ReturnDoc

JAVA, PY = Language.JAVA, Language.PYTHON


def make_elements(params=(), exceptions=(), has_return=False, name="f"):
    return DocElements(
        function_name=name,
        params=tuple(params),
        exceptions=frozenset(exceptions),
        has_return=has_return,
    )


def make_doc(
    leading="",
    params=None,
    exceptions=None,
    ret=None,
):
    params = params or {}
    exceptions = exceptions or {}
    ret = ret or ReturnDoc()
    has_tags = bool(params) or bool(exceptions) or ret.present
    return CommentDoc(
        raw_text=leading,
        leading_description=leading.strip(),
        has_description=bool(leading.strip()),
        count_description=not has_tags,
        params=params,
        exceptions=exceptions,
        return_doc=ret,
    )


def test_java_fully_documented_spec_example():
    elems = make_elements(params=("a", "b"), has_return=True)
    doc = make_doc(
        leading="Adds.",
        params={"a": ParamDoc(True, False), "b": ParamDoc(True, False)},
        ret=ReturnDoc(True, False, True),
    )
    result = completeness(elems, doc, JAVA)
    assert (result.overall, result.available, result.score) == (5, 5, 1.0)


def test_java_partially_documented_spec_example():
    elems = make_elements(params=("a", "b"), has_return=True)
    doc = make_doc(params={"a": ParamDoc(True, False)})
    result = completeness(elems, doc, JAVA)
    assert (result.overall, result.available, result.score) == (5, 2, 0.4)


def test_python_spec_example():
    elems = make_elements(params=("x",), has_return=True)
    doc = make_doc(
        params={"x": ParamDoc(True, False)},
        ret=ReturnDoc(True, False, True),
    )
    result = completeness(elems, doc, PY)
    assert (result.overall, result.available, result.score) == (5, 3, 0.6)


def test_nothing_to_document_scores_one():
    elems = make_elements()
    doc = make_doc(params={"ghost": ParamDoc(True, False)})  # tag, so no desc slot
    result = completeness(elems, doc, JAVA)
    assert result.overall == 0
    assert result.score == 1.0


def test_excess_tags_reported_as_diagnostics():
    elems = make_elements(params=("a",))
    doc = make_doc(
        params={"a": ParamDoc(True, False), "b": ParamDoc(True, False)},
    )
    result = completeness(elems, doc, JAVA)
    assert result.available <= result.overall
    assert any("'b'" in d for d in result.diagnostics)


def test_qualified_exception_suffix_match():
    elems = make_elements(exceptions=("java.io.IOException",))
    doc = make_doc(exceptions={"IOException": ExceptionDoc(True)})
    result = completeness(elems, doc, JAVA)
    # overall = 2*1 + 0 + 0 + 0 (tags present) = 2; available = 1 + 1
    assert (result.overall, result.available, result.score) == (2, 2, 1.0)


def test_qualified_comment_name_matches_short_code_name():
    elems = make_elements(exceptions=("IOException",))
    doc = make_doc(exceptions={"java.io.IOException": ExceptionDoc(False)})
    result = completeness(elems, doc, JAVA)
    assert result.available == 1


def test_return_documented_but_code_returns_nothing():
    elems = make_elements(params=("a",), has_return=False)
    doc = make_doc(params={"a": ParamDoc(True, False)}, ret=ReturnDoc(True, False, True))
    result = completeness(elems, doc, JAVA)
    # return term contributes 0; diagnostic emitted
    assert result.available == 2
    assert any("returns nothing" in d for d in result.diagnostics)


def test_python_type_counts_only_for_intersected_params():
    elems = make_elements(params=("a",))
    doc = make_doc(
        params={"a": ParamDoc(True, True), "ghost": ParamDoc(True, True)},
    )
    result = completeness(elems, doc, PY)
    # overall = 3; available = 1 + 1 + 1 (presence+desc+type for a only)
    assert (result.overall, result.available) == (3, 3)


def test_go_language_rejected():
    with pytest.raises(ValueError, match="completeness_go"):
        completeness(make_elements(), make_doc(), Language.GO)


# ----------------------------------------------------------------- Go rule


def test_go_rule_prefix_match():
    assert completeness_go("Get returns the user.", "Get").score == 1.0


def test_go_rule_wrong_prefix():
    assert completeness_go("Returns the user.", "Get").score == 0.0


def test_go_rule_word_boundary():
    assert completeness_go("Getter for x.", "Get").score == 0.0


def test_go_rule_markers_trimmed():
    assert completeness_go("//  Get fetches a record.", "Get").score == 1.0
    assert completeness_go("/* Get fetches */", "Get").score == 1.0


def test_go_rule_exact_name_only_comment():
    assert completeness_go("Get", "Get").score == 1.0


def test_go_rule_breakdown_consistent():
    hit = completeness_go("Sum adds.", "Sum")
    miss = completeness_go("adds.", "Sum")
    assert (hit.overall, hit.available) == (1, 1)
    assert (miss.overall, miss.available) == (1, 0)
    assert {hit.score, miss.score} <= {0.0, 1.0}


def test_go_rule_empty_inputs():
    assert completeness_go("", "Get").score == 0.0
    assert completeness_go("Get things", "").score == 0.0


# ------------------------------------------------------------- properties


def _random_instance(rng):
    lang = rng.choice([Language.JAVA, Language.CSHARP, Language.PYTHON, Language.JAVASCRIPT])
    pool = ["a", "b", "c", "d", "e", "f", "g"]
    params = rng.sample(pool, rng.randint(0, 4))
    exceptions = rng.sample(["E1", "E2", "pkg.E3"], rng.randint(0, 2))
    elems = make_elements(params, exceptions, has_return=rng.random() < 0.5)

    doc_params = {}
    for name in pool[:5]:
        if rng.random() < 0.4:
            doc_params[name] = ParamDoc(rng.random() < 0.6, rng.random() < 0.4)
    doc_exceptions = {}
    for name in ["E1", "E2", "E3", "E9"]:
        if rng.random() < 0.3:
            doc_exceptions[name] = ExceptionDoc(rng.random() < 0.6)
    ret = ReturnDoc(rng.random() < 0.5, rng.random() < 0.4, rng.random() < 0.5)
    if not ret.present:
        ret = ReturnDoc(False, False, False)
    doc = make_doc(
        leading="words" if rng.random() < 0.7 else "",
        params=doc_params,
        exceptions=doc_exceptions,
        ret=ret,
    )
    return elems, doc, lang


def test_property_available_le_overall_and_score_in_range():
    rng = random.Random(2024)
    for _ in range(500):
        elems, doc, lang = _random_instance(rng)
        result = completeness(elems, doc, lang)
        assert 0 <= result.available <= result.overall or result.overall == 0
        assert 0.0 <= result.score <= 1.0


def test_property_adding_documented_item_never_decreases_score():
    rng = random.Random(77)
    for _ in range(300):
        elems, doc, lang = _random_instance(rng)
        before = completeness(elems, doc, lang).score

        grown = dict(doc.params)
        undocumented = [p for p in elems.params if p not in grown]
        if undocumented:
            grown[undocumented[0]] = ParamDoc(True, True)
        else:
            continue
        doc2 = make_doc(
            leading=doc.leading_description,
            params=grown,
            exceptions=dict(doc.exceptions),
            ret=doc.return_doc,
        )
        after = completeness(elems, doc2, lang).score
        assert after >= before - 1e-12


def test_property_removing_undocumented_param_never_decreases_score():
    rng = random.Random(13)
    for _ in range(300):
        elems, doc, lang = _random_instance(rng)
        undocumented = [p for p in elems.params if p not in doc.params]
        if not undocumented:
            continue
        before = completeness(elems, doc, lang).score
        shrunk = make_elements(
            [p for p in elems.params if p != undocumented[0]],
            sorted(elems.exceptions),
            elems.has_return,
        )
        after = completeness(shrunk, doc, lang).score
        assert after >= before - 1e-12
