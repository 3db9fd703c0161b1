"""Walk through unloading a non-consistent cluster on a short free chain."""
from enriques import EnriquesDiagram, WeightedDiagram, excesses, invariants, unload

chain = EnriquesDiagram({"p": None, "q": "p", "s": "q"})
w = WeightedDiagram.from_vector(chain, (0, 1, 3))
print("start       ", w.vector(), "excess", [excesses(w)[v] for v in chain.order])

rep = unload(w)
for step in rep.steps:
    print("unload", step)
print("result      ", rep.result.vector(), "tame:", rep.tame)

inv = invariants(rep.result)
print(f"delta={inv.delta} branches={inv.branches} milnor={inv.milnor}")
