"""Run the adjacency cascade over small types and tally how each pair is settled."""
import collections
import itertools
import sys

from enriques import adjacency_verdict, enumerate_types, linear_adjacent

degree = int(sys.argv[1]) if len(sys.argv) > 1 else 10
types = enumerate_types(degree)
print(f"{len(types)} types with degree <= {degree}")

tally = collections.Counter()
for x, y in itertools.product(types, repeat=2):
    if x is y:
        continue
    v = adjacency_verdict(x, y)
    tally[(v.kind.value, v.reason)] += 1
for (kind, reason), n in sorted(tally.items()):
    print(f"{kind:14s} {reason:28s} {n}")

# one concrete positive example with its witness
x, y = types[-1], types[0]
ver = linear_adjacent(x, y)
print(x.vector(), "->", y.vector(), ver.kind.value, "witness", ver.certificate.embedding.mapping if ver.certificate else None)
