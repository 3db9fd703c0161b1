"""Print multiplicity sequences and invariants for the simple singularities."""
from enriques import arnold, invariants

rows = [("A", k) for k in range(1, 9)] + [("D", k) for k in range(4, 9)] + [("E", k) for k in (6, 7, 8)]
print(f"{'type':5s} {'mults':22s} delta branches milnor")
for s, k in rows:
    w = arnold(s, k).diagram
    inv = invariants(w)
    print(f"{s}{k:<4d} {str(w.vector()):22s} {inv.delta:5d} {inv.branches:8d} {inv.milnor:6d}")
