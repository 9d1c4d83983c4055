from collections import deque

import numpy as np
import pytest

from src.agent.simulator import AgentSim, generate_trace, sample_random_states
from src.core.errors import GroundingError, IncomparableModelsError, SearchExhaustedError
from src.model.ground import ObservationTrace
from src.model.modes import Mode
from src.model.semantics import successor
from src.pddl.problem import GroundLiteral
from src.planner.grounding import apply, ground, groundings
from src.planner.search import optimal_plan, reachable_distances, satisficing_plan
from src.planner.validate import validate_trace

from tests.conftest import action, atom, load_domain, load_problem


def test_pick_groundings(gripper, gripper_p01):
    picks = groundings(gripper.vocabulary, gripper.vocabulary.action("pick"), gripper_p01.object_types)
    assert len(picks) == 8
    assert picks[0] == action("pick ball1 rooma left")
    assert picks == sorted(picks)


def test_gripper_single_ball_plan(gripper, gripper_p01):
    plan = optimal_plan(ground(gripper, gripper_p01))
    assert list(plan.actions) == [
        action("pick ball1 rooma left"),
        action("move rooma roomb"),
        action("drop ball1 roomb left"),
    ]


def test_gripper_four_balls_plan_length(gripper):
    problem = load_problem(gripper, "gripper", "p02.pddl")
    assert len(optimal_plan(ground(gripper, problem))) == 11


def test_goal_already_satisfied(gripper, gripper_p01):
    task = ground(gripper, gripper_p01)
    task = task.with_goal(task.initial, [GroundLiteral(atom("at ball1 rooma"))])
    assert len(optimal_plan(task)) == 0


def test_unreachable_goal(gripper, gripper_p01):
    task = ground(gripper, gripper_p01)
    goal = [GroundLiteral(atom("carry ball1 left")), GroundLiteral(atom("at ball1 rooma"))]
    task = task.with_goal(task.initial, goal)
    assert optimal_plan(task) is None
    assert satisficing_plan(task) is None


def test_expansion_cap(gripper):
    problem = load_problem(gripper, "gripper", "p02.pddl")
    with pytest.raises(SearchExhaustedError) as info:
        optimal_plan(ground(gripper, problem), expansion_cap=1)
    assert info.value.expansions == 1


def test_satisficing_plan_reaches_goal(gripper, gripper_p01):
    task = ground(gripper, gripper_p01)
    plan = satisficing_plan(task)
    key = task.initial
    for step in plan.actions:
        compiled = task.compiled(step)
        assert compiled.applicable(key)
        key = compiled.apply(key)
    assert task.is_goal(key)


def test_apply_does_not_touch_input(gripper, gripper_p01):
    task = ground(gripper, gripper_p01)
    state = gripper_p01.initial_state
    nxt = apply(task, state, action("pick ball1 rooma left"))
    assert atom("carry ball1 left") in nxt
    assert atom("at ball1 rooma") in state
    assert apply(task, state, action("drop ball1 roomb left")) is None
    with pytest.raises(GroundingError):
        apply(task, state, action("pick ball9 rooma left"))


def test_state_key_conversion(gripper, gripper_p01):
    task = ground(gripper, gripper_p01)
    assert task.state_from_key(task.state_key(gripper_p01.initial_state)) == gripper_p01.initial_state
    with pytest.raises(GroundingError):
        task.state_key([atom("at ball9 rooma")])


def test_reachable_distances_single_sweep(gripper, gripper_p01):
    task = ground(gripper, gripper_p01)
    carried = task.state_key(
        {atom("at-robby rooma"), atom("free right"), atom("carry ball1 left"), atom("at ball2 rooma")}
    )
    moved = task.state_key({atom("at-robby roomb"), atom("free left"), atom("free right"),
                            atom("at ball1 rooma"), atom("at ball2 rooma")})
    result = reachable_distances(task, task.initial, [carried, moved, task.initial])
    assert result.plans[task.initial] == []
    assert len(result.plans[carried]) == 1
    assert len(result.plans[moved]) == 1
    assert not result.exhausted

    shallow = reachable_distances(task, task.initial, [task.state_key(
        {atom("at-robby roomb"), atom("free right"), atom("carry ball1 left"), atom("at ball2 rooma")}
    )], max_depth=1)
    assert shallow.plans == {}


def test_validate_trace(gripper, gripper_trace):
    assert validate_trace(gripper, gripper_trace)
    drop = gripper.vocabulary.pal_tuples_of("drop")
    carry_pre = next(p for p in drop if p.atom.predicate.name == "carry" and p.location.value == "pre")
    weakened = gripper.with_modes({carry_pre: Mode.ABSENT, carry_pre.partner(): Mode.ABSENT})
    assert not validate_trace(weakened, gripper_trace)
    foreign = ObservationTrace((frozenset(), frozenset()), (action("recharge rover1"),))
    with pytest.raises(IncomparableModelsError):
        validate_trace(gripper, foreign)


def test_validate_trace_detects_drift(rover_init, rover_agent, rover_p01):
    trace = generate_trace(rover_agent, rover_p01)
    assert not validate_trace(rover_init, trace)


def _exhaustive_distance(model, objects, start, target):
    """frozenset 상태 위에서 모든 ground 액션을 펼치는 단순 BFS."""
    actions = [
        a for sig in model.vocabulary.actions for a in groundings(model.vocabulary, sig, objects)
    ]
    seen = {start: 0}
    frontier = deque([start])
    while frontier:
        state = frontier.popleft()
        if state == target:
            return seen[state]
        for ground_action in actions:
            nxt = successor(model, state, ground_action)
            if nxt is not None and nxt not in seen:
                seen[nxt] = seen[state] + 1
                frontier.append(nxt)
    return None


def _exact_goal(task, target):
    return [GroundLiteral(a, a in target) for a in task.atoms]


@pytest.mark.parametrize("name,file", [("gripper", "p01.pddl"), ("blocksworld", "p02.pddl"), ("miconic", "p01.pddl")])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_optimal_length_matches_exhaustive_search(name, file, seed):
    model = load_domain(name)
    problem = load_problem(model, name, file)
    agent = AgentSim.from_problems(model, [problem])
    states = sample_random_states(agent, 6, seed=seed)
    rng = np.random.default_rng(seed)
    task = ground(model, problem)
    for _ in range(4):
        i, j = rng.choice(len(states), size=2, replace=len(states) < 2)
        start, target = states[i], states[j]
        plan = optimal_plan(task.with_goal(task.state_key(start), _exact_goal(task, target)))
        expected = _exhaustive_distance(model, problem.object_types, start, target)
        assert plan is not None and expected is not None
        assert len(plan) == expected


@pytest.mark.parametrize("seed", range(4))
def test_optimal_plan_segments_are_optimal(gripper, seed):
    problem = load_problem(gripper, "gripper", "p02.pddl")
    task = ground(gripper, problem)
    plan = optimal_plan(task)
    states = [problem.initial_state]
    for step in plan.actions:
        states.append(apply(task, states[-1], step))
    rng = np.random.default_rng(seed)
    i, j = sorted(rng.choice(len(states), size=2, replace=False))
    segment = optimal_plan(task.with_goal(task.state_key(states[i]), _exact_goal(task, states[j])))
    assert len(segment) == j - i
