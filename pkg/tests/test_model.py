import pytest

from src.core.errors import (
    AbstractModelError,
    GroundingError,
    IncomparableModelsError,
    ModelError,
    TraceAlternationError,
    VocabularyError,
)
from src.model.domain import DomainModel, diff_pal_tuples, is_abstraction, model_diff
from src.model.ground import ActionTriplet, ObservationTrace
from src.model.modes import (
    LEGAL_PA_VALUES,
    Mode,
    PaValue,
    Presence,
    PresenceTuple,
    consistent_pa_values,
)
from src.model.semantics import ground_effects, presence_tuple, successor, triplet_consistent
from src.model.vocabulary import (
    ActionSignature,
    Location,
    PredicateSignature,
    Vocabulary,
    enumerate_pal_tuples,
)

from tests.conftest import action, atom, load_domain


def _navigate_vocab() -> Vocabulary:
    return Vocabulary.build(
        [PredicateSignature("can_traverse", ("rover", "waypoint", "waypoint"))],
        [ActionSignature("navigate", ("?rover", "?src", "?dest"), ("rover", "waypoint", "waypoint"))],
        {"rover": "object", "waypoint": "object"},
    )


class TestVocabulary:
    def test_can_traverse_has_four_lifted_atoms(self):
        vocab = _navigate_vocab()
        bindings = {pal.atom.binding for pal in vocab.pal_tuples}
        assert bindings == {
            ("?rover", "?src", "?dest"),
            ("?rover", "?dest", "?src"),
            ("?rover", "?src", "?src"),
            ("?rover", "?dest", "?dest"),
        }
        assert vocab.n_pals == 8

    def test_zero_arity_predicate(self):
        vocab = Vocabulary.build(
            [PredicateSignature("handempty")],
            [ActionSignature("wait"), ActionSignature("grab", ("?x",), ("object",))],
        )
        assert vocab.n_pals == 4
        assert [p.action.name for p in vocab.pal_tuples] == ["grab", "grab", "wait", "wait"]

    def test_canonical_order(self):
        vocab = load_domain("blocksworld").vocabulary
        keys = [p.sort_key() for p in vocab.pal_tuples]
        assert keys == sorted(keys)
        assert len(set(vocab.pal_tuples)) == vocab.n_pals
        for pre_idx, eff_idx in vocab.pa_slots:
            assert vocab.pal_tuples[pre_idx].partner() == vocab.pal_tuples[eff_idx]

    @pytest.mark.parametrize(
        "name,distinct,expected",
        [
            ("gripper", False, 20),
            ("gripper", True, 20),
            ("blocksworld", True, 52),
            ("blocksworld", False, 64),
            ("miconic", True, 36),
        ],
    )
    def test_benchmark_pal_counts(self, name, distinct, expected):
        assert load_domain(name, distinct_bindings=distinct).vocabulary.n_pals == expected

    def test_subtype_binding(self):
        pals = enumerate_pal_tuples(
            [PredicateSignature("at", ("locatable",))],
            [ActionSignature("move", ("?t",), ("truck",))],
            {"locatable": "object", "truck": "locatable"},
        )
        assert len(pals) == 2

    def test_rejects_bad_signatures(self):
        with pytest.raises(VocabularyError):
            Vocabulary.build([PredicateSignature("p", ("ghost",))], [])
        with pytest.raises(VocabularyError):
            Vocabulary.build([PredicateSignature("p"), PredicateSignature("p")], [])
        with pytest.raises(VocabularyError):
            ActionSignature("a", ("?x", "?x"), ("object", "object"))
        with pytest.raises(VocabularyError):
            Vocabulary.build([], [], {"a": "b", "b": "a"})


class TestModes:
    def test_illegal_pa_values(self):
        with pytest.raises(ModelError):
            PaValue(Mode.PLUS, Mode.PLUS)
        with pytest.raises(ModelError):
            PaValue(Mode.MINUS, Mode.MINUS)
        assert len(LEGAL_PA_VALUES) == 7

    def test_consistency_grid_counts(self):
        columns = [PresenceTuple(a, b) for a in Presence for b in Presence]
        marks = sum(1 for pt in columns for v in LEGAL_PA_VALUES if v in consistent_pa_values(pt))
        assert marks == 10
        assert len(columns) * len(LEGAL_PA_VALUES) - marks == 18

    def test_grid_matches_execution_semantics(self):
        """실행 가능한 (pa 값, 사전 진리값) 조합의 결과가 표의 열과 정확히 일치한다."""
        for value in LEGAL_PA_VALUES:
            for holds in (True, False):
                applicable = not (
                    (value.pre is Mode.PLUS and not holds) or (value.pre is Mode.MINUS and holds)
                )
                for after in (True, False):
                    column = consistent_pa_values(PresenceTuple.of(holds, after))
                    produced = (
                        applicable
                        and after == (value.eff is Mode.PLUS or (holds and value.eff is not Mode.MINUS))
                    )
                    assert (value in column) == produced, (value, holds, after)


class TestDomainModel:
    def test_rover_pair_differs_in_five(self, rover_init, rover_drift):
        assert model_diff(rover_init, rover_drift) == 5
        changed = {(str(p.atom), p.location) for p, _, _ in diff_pal_tuples(rover_init, rover_drift)}
        assert changed == {
            ("(battery_half ?r)", Location.PRE),
            ("(battery_full ?r)", Location.PRE),
            ("(battery_half ?r)", Location.EFF),
            ("(battery_full ?r)", Location.EFF),
            ("(battery_reserve ?r)", Location.EFF),
        }
        assert all(p.action.name == "sample_rock" for p, _, _ in diff_pal_tuples(rover_init, rover_drift))

    def test_diff_is_symmetric_and_zero_on_self(self, gripper):
        other = gripper.with_modes({gripper.pal_tuples[0]: Mode.MINUS})
        assert model_diff(gripper, gripper) == 0
        assert model_diff(gripper, other) == model_diff(other, gripper) == 1

    def test_incomparable_vocabularies(self, gripper, rover_drift):
        with pytest.raises(IncomparableModelsError):
            model_diff(gripper, rover_drift)

    def test_illegal_assignment_rejected(self, gripper):
        pick = gripper.vocabulary.action("pick")
        carry = next(p for p in gripper.vocabulary.pal_tuples_of("pick") if p.atom.predicate.name == "carry")
        assert gripper.pa_value(carry.atom, pick) == PaValue(Mode.ABSENT, Mode.PLUS)
        with pytest.raises(ModelError):
            gripper.with_modes({carry: Mode.PLUS, carry.partner(): Mode.PLUS})

    def test_abstraction(self, gripper):
        some = gripper.vocabulary.pal_tuples_of("move")
        abstract = gripper.abstract(some)
        assert not abstract.is_concrete
        assert set(abstract.unknown_pal_tuples()) == set(some)
        assert is_abstraction(abstract, gripper)
        assert not is_abstraction(gripper, abstract)
        assert is_abstraction(DomainModel.unknown(gripper.vocabulary), gripper)

    def test_debug_dump_lists_every_pal(self, gripper):
        lines = gripper.debug_dump().splitlines()
        assert len(lines) == 1 + gripper.vocabulary.n_pals


class TestSemantics:
    STATE_FULL = {"equipped_rock_analysis rover1", "battery_full rover1", "at rover1 waypoint1"}

    def test_drifted_sample_rock_with_full_battery(self, rover_drift):
        state = frozenset(atom(a) for a in self.STATE_FULL)
        result = successor(rover_drift, state, action("sample_rock rover1 storage1 waypoint1"))
        assert atom("battery_half rover1") in result
        assert atom("battery_full rover1") not in result
        assert atom("rock_sample_taken rover1") in result

    def test_drifted_sample_rock_with_half_battery(self, rover_drift):
        state = frozenset(
            atom(a) for a in ("equipped_rock_analysis rover1", "battery_half rover1", "at rover1 waypoint1")
        )
        assert successor(rover_drift, state, action("sample_rock rover1 storage1 waypoint1")) is None

    def test_add_wins_on_collision(self, gripper):
        effects = ground_effects(gripper, action("move rooma rooma"))
        assert effects.add == {atom("at-robby rooma")}
        assert not effects.delete

    def test_unknown_modes_are_rejected(self, gripper):
        with pytest.raises(AbstractModelError):
            ground_effects(gripper.abstract(gripper.vocabulary.pal_tuples_of("move")), action("move rooma roomb"))

    def test_triplet_consistency(self, rover_drift, rover_init):
        pre = frozenset(atom(a) for a in self.STATE_FULL)
        act = action("sample_rock rover1 storage1 waypoint1")
        post = successor(rover_drift, pre, act)
        triplet = ActionTriplet(pre, act, post)
        assert triplet_consistent(rover_drift, triplet)
        assert not triplet_consistent(rover_init, triplet)
        pt = presence_tuple(triplet, atom("battery_full rover1"))
        assert pt == PresenceTuple(Presence.POS, Presence.NEG)
        with pytest.raises(GroundingError):
            presence_tuple(triplet, atom("battery_full rover9"), objects=["rover1"])


class TestTrace:
    def test_alternation(self):
        s = frozenset()
        with pytest.raises(TraceAlternationError):
            ObservationTrace((s,), (action("noop"),))
        with pytest.raises(TraceAlternationError):
            ObservationTrace(())
        trace = ObservationTrace((s, s, s), (action("a"), action("b")))
        assert len(trace) == 2
        assert len(list(trace.triplets())) == 2
        assert len(trace.truncated(1)) == 1
        assert len(trace.truncated(5)) == 2
