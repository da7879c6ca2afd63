#!/usr/bin/env python3
# Molecular formulas as degree vectors: atoms are vertices, valences are
# degrees, bond orders are multiplicities. Fragments force a group to stay
# bonded together.

from nestflip import parse_instance, enumerate_members, build_fragment_tree, is_realizable

inst = parse_instance('formula: "C2H6O"\n')
tree = build_fragment_tree(inst.collection)
print(inst.labels)
print("realizable:", bool(is_realizable(inst.degrees, tree)))


# In[2]:

# every labelled structure of C2H6O, then only those keeping the O and its
# first H together with carbon 0
def count(inst):
    return sum(1 for _ in enumerate_members(inst.degrees, inst.collection))

print("labelled members:", count(inst))

hydroxyl = parse_instance('formula: "C2H6O"\nfragments: [[0, 2, 8]]\n')
print("with fragment {C0, H, O}:", count(hydroxyl))


# In[3]:

# CO2 needs double bonds
co2 = parse_instance('formula: "CO2"\n')
for g in enumerate_members(co2.degrees, co2.collection):
    print({f"{co2.labels[u]}{u}-{co2.labels[v]}{v}": k for (u, v), k in g.pairs()})

# an impossible one: the root has too little room for a tree
bad = parse_instance('formula: "H4"\n')
print(is_realizable(bad.degrees, build_fragment_tree(bad.collection)).reason)
