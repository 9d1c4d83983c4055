import pytest

from src.agent.drift import DriftMethod, DriftSpec, inject_drift
from src.agent.queries import Query, QueryResponse
from src.agent.simulator import (
    AgentSim,
    PlanningMode,
    answer_query,
    generate_trace,
    sample_random_states,
    select_trace_problem,
)
from src.core.errors import InfeasibleDriftError, NoTraceError, QueryFormatError
from src.model.domain import model_diff
from src.model.modes import Mode
from src.pddl.problem import GroundLiteral, ProblemInstance
from src.planner.validate import validate_trace

from tests.conftest import action, atom, load_domain, load_problem

SAMPLE = "sample_rock rover1 storage1 waypoint1"


class TestSimulator:
    def test_half_battery_query_fails(self, rover_agent):
        start = frozenset(
            atom(a) for a in ("equipped_rock_analysis rover1", "battery_half rover1", "at rover1 waypoint1")
        )
        response = answer_query(rover_agent, Query(start, (action(SAMPLE),)))
        assert response == QueryResponse(0, start)

    def test_prefix_execution(self, gripper_agent, gripper_p01):
        plan = (
            action("pick ball1 rooma left"),
            action("drop ball1 roomb left"),
            action("move rooma roomb"),
        )
        response = gripper_agent.simulate(Query(gripper_p01.initial_state, plan))
        assert response.n_f == 1
        assert atom("carry ball1 left") in response.s_f

    def test_empty_plan(self, gripper_agent, gripper_p01):
        response = gripper_agent.simulate(Query(gripper_p01.initial_state, ()))
        assert response == QueryResponse(0, gripper_p01.initial_state)

    def test_malformed_queries(self, gripper_agent, gripper_p01):
        with pytest.raises(QueryFormatError):
            gripper_agent.simulate(Query(frozenset({atom("at ball9 rooma")}), ()))
        with pytest.raises(QueryFormatError):
            gripper_agent.simulate(Query(gripper_p01.initial_state, (action("pick ball9 rooma left"),)))

    def test_hidden_model_not_in_repr(self, gripper_agent):
        assert "DomainModel" not in repr(gripper_agent)

    def test_generated_trace_is_consistent(self, gripper, gripper_agent, gripper_p01):
        trace = generate_trace(gripper_agent, gripper_p01)
        assert len(trace) == 3
        assert trace.objects == gripper_p01.objects
        assert validate_trace(gripper, trace)

    def test_satisficing_agent(self, gripper, gripper_p01):
        agent = AgentSim.from_problems(gripper, [gripper_p01], mode=PlanningMode.SATISFICING)
        assert validate_trace(gripper, generate_trace(agent, gripper_p01))

    def test_unsolvable_problem(self, gripper, gripper_agent, gripper_p01):
        impossible = ProblemInstance(
            "impossible",
            gripper_p01.domain_name,
            gripper_p01.objects,
            gripper_p01.initial_state,
            frozenset({GroundLiteral(atom("carry ball1 left")), GroundLiteral(atom("at ball1 rooma"))}),
        )
        with pytest.raises(NoTraceError):
            generate_trace(gripper_agent, impossible)


class TestTraceSelection:
    def test_truncates_to_requested_length(self, gripper):
        problems = [load_problem(gripper, "gripper", f) for f in ("p01.pddl", "p02.pddl")]
        agent = AgentSim.from_problems(gripper, problems)
        problem, trace = select_trace_problem(agent, problems, 10, seed=3)
        assert problem.name == "gripper-4"
        assert len(trace) == 10

    def test_falls_back_to_longest(self, gripper_agent, gripper_p01):
        problem, trace = select_trace_problem(gripper_agent, [gripper_p01], 10, seed=0)
        assert problem is gripper_p01
        assert len(trace) == 3

    def test_deterministic(self, gripper):
        problems = [load_problem(gripper, "gripper", f) for f in ("p01.pddl", "p02.pddl")]
        agent = AgentSim.from_problems(gripper, problems)
        assert select_trace_problem(agent, problems, 2, seed=11) == select_trace_problem(agent, problems, 2, seed=11)


class TestRandomStates:
    def test_distinct_sorted_and_reproducible(self, gripper_agent):
        states = sample_random_states(gripper_agent, 12, seed=5)
        assert len(states) == 12
        assert len(set(states)) == 12
        assert states == sample_random_states(gripper_agent, 12, seed=5)
        assert gripper_agent.initial_states[0] in states

    def test_capacity_bound(self, rover_drift):
        problem = ProblemInstance("tiny", "rover", (("rover1", "rover"),), frozenset())
        agent = AgentSim.from_problems(rover_drift, [problem])
        # rover1 하나로 만들 수 있는 ground atom 은 5개, 상태는 최대 32개
        assert len(sample_random_states(agent, 50, seed=1)) == 32


class TestDrift:
    @pytest.mark.parametrize("method", [DriftMethod.DROP, DriftMethod.MIXED])
    def test_half_drift_on_gripper(self, gripper, method):
        drifted = inject_drift(gripper, DriftSpec(0.5, method, seed=7))
        assert model_diff(drifted, gripper) == 10
        assert drifted.is_concrete

    def test_drop_only_clears_modes(self, gripper):
        drifted = inject_drift(gripper, DriftSpec(0.4, DriftMethod.DROP, seed=2))
        for before, after in zip(gripper.modes, drifted.modes):
            assert before is after or after is Mode.ABSENT

    def test_add_only_fills_absent(self, gripper):
        drifted = inject_drift(gripper, DriftSpec(0.3, DriftMethod.ADD, seed=2))
        assert model_diff(drifted, gripper) == 6
        for before, after in zip(gripper.modes, drifted.modes):
            assert before is after or before is Mode.ABSENT

    def test_seeded(self, gripper):
        spec = DriftSpec(0.6, DriftMethod.MIXED, seed=42)
        assert inject_drift(gripper, spec) == inject_drift(gripper, spec)

    def test_zero_drift(self, gripper):
        assert inject_drift(gripper, DriftSpec(0.0)) == gripper

    def test_rounding(self):
        assert DriftSpec(0.25).flip_count(10) == 3
        assert DriftSpec(0.5).flip_count(20) == 10
        assert DriftSpec(1.0).flip_count(7) == 7

    def test_infeasible(self, gripper):
        with pytest.raises(InfeasibleDriftError):
            inject_drift(gripper, DriftSpec(1.0, DriftMethod.DROP))
        with pytest.raises(InfeasibleDriftError):
            inject_drift(gripper, DriftSpec(0.5, DriftMethod.ADD))
        with pytest.raises(InfeasibleDriftError):
            DriftSpec(1.5)

    @pytest.mark.parametrize("name", ["blocksworld", "miconic", "satellite"])
    def test_exact_flip_count(self, name):
        model = load_domain(name, distinct_bindings=True)
        for i, level in enumerate((0.1, 0.3, 0.5)):
            spec = DriftSpec(level, DriftMethod.MIXED, seed=i)
            assert model_diff(inject_drift(model, spec), model) == spec.flip_count(model.vocabulary.n_pals)
