"""Small named instances used in tests, scripts and the README."""

from .choice import Linear, Union
from .core import Instance


def cyc3() -> Instance:
    """Three agents in a cycle: each prefers the next agent, then the previous one, then being alone."""
    agents = ["1", "2", "3"]
    contracts = [
        ("a1", ["1"]), ("a2", ["2"]), ("a3", ["3"]),
        ("c12", ["1", "2"]), ("c23", ["2", "3"]), ("c31", ["3", "1"]),
    ]
    equipment = {
        "1": Linear(["c12", "c31", "a1"]),
        "2": Linear(["c23", "c12", "a2"]),
        "3": Linear(["c31", "c23", "a3"]),
    }
    return Instance.build(agents, contracts, equipment)


def marriage2() -> Instance:
    """Two men, two women, everyone ranks the partner with the same index first."""
    agents = ["m1", "m2", "w1", "w2"]
    contracts = [(f"m{i}w{j}", [f"m{i}", f"w{j}"]) for i in (1, 2) for j in (1, 2)]
    equipment = {
        "m1": Linear(["m1w1", "m1w2"]),
        "m2": Linear(["m2w2", "m2w1"]),
        "w1": Linear(["m1w1", "m2w1"]),
        "w2": Linear(["m2w2", "m1w2"]),
    }
    return Instance.build(agents, contracts, equipment)


def split2() -> Instance:
    """Agent 0 takes the union of two opposite orders on contracts c, d shared with j."""
    contracts = [("c", ["0", "j"]), ("d", ["0", "j"])]
    equipment = {
        "0": Union([["c", "d"], ["d", "c"]]),
        "j": Linear(["c", "d"]),
    }
    return Instance.build(["0", "j"], contracts, equipment)


NAMED = {"cyc3": cyc3, "marriage2": marriage2, "split2": split2}
