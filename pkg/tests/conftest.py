from pathlib import Path

import pytest

from src.agent.simulator import AgentSim, select_trace_problem
from src.model.ground import Atom, GroundAction
from src.pddl.domain import parse_domain
from src.pddl.problem import parse_problem

CORPUS = Path(__file__).resolve().parent.parent / "data" / "corpus"


def corpus_path(*parts: str) -> Path:
    return CORPUS.joinpath(*parts)


def load_domain(name: str, file: str = "domain.pddl", distinct_bindings: bool = False):
    return parse_domain(corpus_path(name, file).read_text(encoding="utf-8"), distinct_bindings)


def load_problem(model, name: str, file: str):
    return parse_problem(corpus_path(name, file).read_text(encoding="utf-8"), model)


def atom(text: str) -> Atom:
    name, *args = text.split()
    return Atom(name, tuple(args))


def action(text: str) -> GroundAction:
    name, *args = text.split()
    return GroundAction(name, tuple(args))


@pytest.fixture
def gripper():
    return load_domain("gripper")


@pytest.fixture
def gripper_p01(gripper):
    return load_problem(gripper, "gripper", "p01.pddl")


@pytest.fixture
def gripper_agent(gripper, gripper_p01):
    return AgentSim.from_problems(gripper, [gripper_p01])


@pytest.fixture
def gripper_trace(gripper_agent, gripper_p01):
    _, trace = select_trace_problem(gripper_agent, [gripper_p01], 10, seed=0)
    return trace


@pytest.fixture
def rover_drift():
    """sample_rock 이 battery_full 을 요구하는 drift 이후 모델."""
    return load_domain("rover")


@pytest.fixture
def rover_init():
    return load_domain("rover", "rover_init.pddl")


@pytest.fixture
def rover_p01(rover_drift):
    return load_problem(rover_drift, "rover", "p01.pddl")


@pytest.fixture
def rover_agent(rover_drift, rover_p01):
    return AgentSim.from_problems(rover_drift, [rover_p01])
