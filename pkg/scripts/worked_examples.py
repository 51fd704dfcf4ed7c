"""Print the two-vertex and triangle worked examples through every route."""

from jellywalk import io as jio
from jellywalk.graph import build_jellyfish
from jellywalk.observables import analyze
from jellywalk.solver import StationaryState, solve_electric, solve_fixed_point
from jellywalk.walk import BoundaryInput, evolve

EXAMPLES = {
    "two-vertex": build_jellyfish(2, [(1, 2)], [1, 2]),
    "triangle": build_jellyfish(3, [(1, 2), (2, 3), (1, 3)], [1, 2]),
}

if __name__ == "__main__":
    b = BoundaryInput([1, 0])
    for name, g in EXAMPLES.items():
        states = {
            "fixed-point": solve_fixed_point(g, b),
            "electric": solve_electric(g, b),
            "evolve(300)": StationaryState.from_amplitudes(g, evolve(g, b, 300).final, b),
        }
        for route, s in states.items():
            print(f"== {name} / {route}")
            print(jio.serialize_report(analyze(g, s), "csv"))
