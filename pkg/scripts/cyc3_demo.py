"""Walk through the three-agent cycle: no stable system, but meta-stable ones exist."""

from contractnet import catalog
from contractnet.bruteforce import enumerate_compromises, enumerate_metastable
from contractnet.metastable import classify_components, find_compromise, minimize, solve_metastable, system_from_compromise
from contractnet.stability import enumerate_stable, find_blocking


def main():
    inst = catalog.cyc3()
    print("stable systems:", enumerate_stable(inst))
    for s in [set(), {"c12"}, {"c12", "a3"}, {"c12", "c23"}]:
        print(f"  blocking {sorted(s)}: {find_blocking(inst, s)}")
    x = find_compromise(inst)
    print("compromise:", x.as_tuple(inst.agents), "of", len(enumerate_compromises(inst)), "on the grid")
    print("threshold system:", sorted(system_from_compromise(inst, x)))
    print("solve:", sorted(solve_metastable(inst)))
    meta = enumerate_metastable(inst)
    print(f"{len(meta)} meta-stable systems:")
    for s in meta:
        print("  ", sorted(s))
    full = {"c12", "c23", "c31"}
    small = minimize(inst, full)
    print("minimize", sorted(full), "->", sorted(small))
    for comp in classify_components(inst, small):
        print("  component", comp.shape, comp.agents, "center", comp.center)


if __name__ == "__main__":
    main()
