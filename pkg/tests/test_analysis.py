from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import element, fmt9, oracle_evaluate, random_assessment, random_model
from qmm import dsl
from qmm.analysis import UnknownGoal, UnresolvableBinding, evaluate, goal_report, trace_fact
from qmm.dsl import Assessment
from qmm.model import AppliesTo, Direction, Impact, ModelBuilder, NotFound, QualityModel
import dataclasses


def test_trace_font_face(corpus):
    (entry,) = trace_fact(corpus, "Font Face")
    assert str(entry.impact.target) == "[Use/Interacting with the Product/Evaluating/Perception|DURATION]"
    assert entry.goal_names == ("EFFICIENCY",)
    assert entry.render().endswith("goals: EFFICIENCY")


def test_trace_inert_fact_is_empty(corpus):
    assert trace_fact(corpus, "Context of Use") == []


def test_trace_unknown_fact(corpus):
    with pytest.raises(NotFound):
        trace_fact(corpus, "Nope")


def test_trace_output_data_on_iso(iso):
    entries = trace_fact(iso, "Output Data")
    leaves = sorted((e.impact.target.path.leaf, e.impact.target.attribute) for e in entries)
    assert leaves == [("Interpretation", "DURATION"), ("Interpretation", "PROBABILITY_OF_ERROR"), ("Perception", "COGNITIVE_LOAD")]


def test_trace_covers_descendants(corpus):
    sources = {e.impact.source.path.leaf for e in trace_fact(corpus, "Logical User Interface")}
    assert sources == {"Font Face", "Input Validity Checks", "Dialogue Management"}


def test_goal_report_effectiveness_iso(iso):
    pairs = {(e.source.path.leaf, e.target.path.leaf) for e in goal_report(iso, "EFFECTIVENESS")}
    assert ("Television", "Driving") in pairs


def test_goal_report_empty_basis(corpus):
    report = goal_report(corpus, "SATISFACTION")
    assert list(report) == []
    assert report.note.startswith("I101")


def test_goal_report_efficiency_includes_font_face(corpus):
    assert "Font Face" in {e.source.path.leaf for e in goal_report(corpus, "EFFICIENCY")}


def test_goal_report_unknown(corpus):
    with pytest.raises(UnknownGoal):
        goal_report(corpus, "SPEED")


def single(direction=Direction.POSITIVE):
    return (
        ModelBuilder("M")
        .attribute("EXISTENCE", AppliesTo.FACT)
        .attribute("PROBABILITY_OF_ERROR", AppliesTo.ACTIVITY)
        .goal("EFFECTIVENESS", "PROBABILITY_OF_ERROR")
        .fact("F", "EXISTENCE")
        .activity("A", "PROBABILITY_OF_ERROR")
        .impact(("F", "EXISTENCE"), ("A", "PROBABILITY_OF_ERROR"), direction)
        .build()
    )


def test_single_positive_impact():
    r = evaluate(single(), Assessment({element("F", "EXISTENCE"): 1.0}))
    assert r.tuple_scores[element("A", "PROBABILITY_OF_ERROR")] == 1.0
    assert r.goal_scores["EFFECTIVENESS"] == 1.0


def test_single_negative_impact():
    r = evaluate(single(Direction.NEGATIVE), Assessment({element("F", "EXISTENCE"): 1.0}))
    assert r.tuple_scores[element("A", "PROBABILITY_OF_ERROR")] == -1.0


def three_impact_model():
    return (
        ModelBuilder("Toy")
        .attribute("Q", AppliesTo.FACT)
        .attribute("D", AppliesTo.ACTIVITY)
        .fact("F1", "Q").fact("F2", "Q").fact("F3", "Q")
        .activity("A", "D")
        .impact(("F1", "Q"), ("A", "D"), Direction.POSITIVE, 0.5)
        .impact(("F2", "Q"), ("A", "D"), Direction.POSITIVE, 0.5)
        .impact(("F3", "Q"), ("A", "D"), Direction.NEGATIVE, 1.0)
        .build()
    )


def test_three_impact_toy():
    m = three_impact_model()
    a = Assessment({element("F1", "Q"): 1.0, element("F2", "Q"): 0.5, element("F3", "Q"): 1.0})
    expected_tuples, _, _ = oracle_evaluate(m, a)
    assert expected_tuples[(("A",), "D")] == Fraction(-1, 4)
    assert evaluate(m, a).tuple_scores[element("A", "D")] == -0.25


def test_unassessed_sources_count_as_zero():
    r = evaluate(three_impact_model(), Assessment({element("F1", "Q"): 1.0}))
    assert r.tuple_scores[element("A", "D")] == 0.5


def test_frequency_weights_roll_up():
    m = dsl.parse(
        'model "M"\nfact F { has EXISTENCE }\n'
        "activity Root { activity A { has FREQUENCY has DURATION } activity B { has FREQUENCY has DURATION } }\n"
        "impact [F|EXISTENCE] -> [A|DURATION] +\n",
        prelude=True,
    )
    a = Assessment({element("F", "EXISTENCE"): 1.0, element("Root/A", "FREQUENCY"): 0.75, element("Root/B", "FREQUENCY"): 0.25})
    r = evaluate(m, a)
    assert r.node_scores[element("Root", "X").path] == {"DURATION": 0.75}
    assert r.goal_scores["EFFICIENCY"] == 0.75
    assert r.goal_scores["SAFETY"] == 0.0


def test_unresolvable_binding():
    with pytest.raises(UnresolvableBinding):
        evaluate(single(), Assessment({element("Ghost", "EXISTENCE"): 1.0}))
    with pytest.raises(UnresolvableBinding):
        evaluate(single(), Assessment({element("A", "FREQUENCY"): 1.0}))


def test_iso_sample_assessment(iso, iso_assessment):
    r = evaluate(iso, iso_assessment)
    interp = next(k for k in r.tuple_scores if k.path.leaf == "Interpretation" and k.attribute == "PROBABILITY_OF_ERROR")
    assert r.tuple_scores[interp] == 1.25
    assert r.render_text() == evaluate(iso, iso_assessment).render_text()


# -- property suites --

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def scores(report):
    out = {("t", k): v for k, v in report.tuple_scores.items()}
    out.update({("n", p, a): v for p, d in report.node_scores.items() for a, v in d.items()})
    out.update({("g", g): v for g, v in report.goal_scores.items()})
    return out


@settings(max_examples=100, deadline=None)
@given(seeds, st.sampled_from([0.0, 0.25, 0.5, 2.0, -1.0, 0.1]))
def test_linearity(seed, factor):
    rng = random.Random(seed)
    m = random_model(rng)
    a = random_assessment(rng, m)
    base = scores(evaluate(m, a))
    scaled = scores(evaluate(m, a.scaled(factor, keep={"FREQUENCY"})))
    assert scaled.keys() == base.keys()
    exact = factor in (0.0, 0.25, 0.5, 2.0, -1.0)  # scaling by these is lossless in binary
    for key, value in base.items():
        if exact:
            assert scaled[key] == factor * value
        else:
            assert scaled[key] == pytest.approx(factor * value, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_sign_symmetry(seed):
    rng = random.Random(seed)
    m = random_model(rng)
    a = random_assessment(rng, m)
    flipped = dataclasses.replace(
        m, impacts=tuple(dataclasses.replace(i, direction=i.direction.flipped()) for i in m.impacts)
    )
    base, neg = scores(evaluate(m, a)), scores(evaluate(flipped, a))
    assert neg == {k: -v + 0.0 for k, v in base.items()}


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_zero_assessed_impact_is_neutral(seed):
    rng = random.Random(seed)
    m = random_model(rng)
    a = random_assessment(rng, m)
    sources = [e for e, _ in m.fact_tuples()]
    targets = list(m.activity_tuples())
    if not sources or not targets:
        return
    src, tgt = rng.choice(sources), rng.choice(targets)
    if any(i.key == (src, tgt) for i in m.impacts):
        return
    extra = dataclasses.replace(m, impacts=m.impacts + (Impact(src, tgt, rng.choice(list(Direction)), rng.uniform(0.01, 1)),))
    zeroed = Assessment({**a.bindings, src: 0.0})
    assert scores(evaluate(extra, zeroed)) == scores(evaluate(m, zeroed))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_roll_up_bound(seed):
    rng = random.Random(seed)
    m = random_model(rng)
    a = random_assessment(rng, m)
    r = evaluate(m, a)
    if all(-1 <= v <= 1 for v in r.tuple_scores.values()):
        for per_node in r.node_scores.values():
            assert all(-1 <= v <= 1 for v in per_node.values())


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_matches_oracle(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_impacts=10)
    a = random_assessment(rng, m)
    r = evaluate(m, a)
    tuples, nodes, goals = oracle_evaluate(m, a)
    assert {(k.path.segments, k.attribute): fmt9(v) for k, v in r.tuple_scores.items()} == {k: fmt9(v) for k, v in tuples.items()}
    assert {p.segments: {x: fmt9(v) for x, v in d.items()} for p, d in r.node_scores.items()} == {
        p: {x: fmt9(v) for x, v in d.items()} for p, d in nodes.items()
    }
    assert {g: fmt9(v) for g, v in r.goal_scores.items()} == {g: fmt9(v) for g, v in goals.items()}


def test_empty_model_evaluates_to_nothing():
    r = evaluate(QualityModel("Empty"), Assessment({}))
    assert (r.tuple_scores, r.node_scores, r.goal_scores) == ({}, {}, {})
