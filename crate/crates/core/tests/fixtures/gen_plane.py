"""Regenerates plane.json: plane graphs with rotation systems and an outer face
meeting the hypotheses of the pairwise-3456 and intersecting-5-cycle audits.

The designated clause is computed here with networkx, independently of the
Rust matcher, and stored as the expected value.

    python3 gen_plane.py > plane.json
"""

import itertools
import json
import random
import sys
from pathlib import Path

import networkx as nx
from networkx.algorithms import isomorphism

CATALOG = Path(__file__).resolve().parents[2] / "data" / "catalog.txt"


def read_catalog():
    out, cur = {}, None
    for raw in CATALOG.read_text().splitlines():
        toks = raw.split("#")[0].split()
        if not toks:
            continue
        if toks[0] in ("config", "pattern"):
            cur = {"name": toks[1], "deg": {}, "edges": [], "non": []}
        elif toks[0] == "vertex":
            cur["deg"][toks[1]] = int(toks[2])
        elif toks[0] == "edge":
            cur["edges"].append((toks[1], toks[2]))
        elif toks[0] == "nonedge":
            cur["non"].append((toks[1], toks[2]))
        elif toks[0] == "end":
            out[cur["name"]] = cur
    return out


CAT = read_catalog()


def pattern_graph(c):
    p = nx.Graph()
    p.add_edges_from(c["edges"])
    return p


def contains(g, name):
    gm = isomorphism.GraphMatcher(g, pattern_graph(CAT[name]))
    return any(True for _ in gm.subgraph_monomorphisms_iter())


def config_match(g, name, boundary):
    c = CAT[name]
    p = pattern_graph(c)
    gm = isomorphism.GraphMatcher(g, p)
    for hm in gm.subgraph_monomorphisms_iter():
        m = {v: h for h, v in hm.items()}
        image = set(m.values())
        if image & boundary:
            continue
        if any(g.has_edge(m[a], m[b]) for a, b in c["non"]):
            continue
        ok = True
        for v, d in c["deg"].items():
            h = m[v]
            outside = sum(1 for w in g[h] if w not in image)
            if g.degree(h) != d or outside != d - p.degree(v):
                ok = False
                break
        if ok:
            return True
    return False


def intersecting(g):
    cyc = [set(c) for c in nx.simple_cycles(g, length_bound=5) if len(c) == 5]
    return any(a & b for a, b in itertools.combinations(cyc, 2))


def good(g, cyc):
    if len(cyc) not in (3, 4) or len(set(cyc)) != len(cyc):
        return False
    return all(sum(1 for c in cyc if g.has_edge(v, c)) < 4 for v in g)


def clause(g, outer, theorem):
    boundary = set(outer)
    if boundary == set(g):
        return 1
    if any(v not in boundary and g.degree(v) <= 3 for v in g):
        return 2
    if theorem == "pairwise3456":
        if config_match(g, "Kite", boundary):
            return 3
        if config_match(g, "F35", boundary):
            return 4
        return None
    names = ["Kite", "F35", "RC1-a", "RC-1", "RC-2a", "RC-2b"]
    return 3 if any(config_match(g, n, boundary) for n in names) else None


def hypotheses(g, outer, theorem):
    if not nx.is_connected(g):
        return False
    if theorem == "pairwise3456":
        if not good(g, outer):
            return False
        return not any(contains(g, "P-" + x) for x in "abcdefgh")
    return len(outer) == 3 and not intersecting(g)


def faces(emb):
    seen, out = set(), []
    for u, v in emb.edges():
        if (u, v) in seen:
            continue
        f = emb.traverse_face(u, v, mark_half_edges=seen)
        out.append(f)
    return out


def record(name, g, emb, outer, theorem, expect):
    n = g.number_of_nodes()
    return {
        "name": name,
        "theorem": theorem,
        "n": n,
        "edges": sorted([min(u, v), max(u, v)] for u, v in g.edges()),
        "rotation": [list(emb.neighbors_cw_order(v)) for v in range(n)],
        "outer": outer,
        "clause": expect,
    }


def relabel(g):
    return nx.convert_node_labels_to_integers(g, ordering="sorted")


def random_planar(rng, n, p):
    g = nx.Graph()
    g.add_nodes_from(range(n))
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    for u, v in pairs:
        if rng.random() > p:
            continue
        g.add_edge(u, v)
        if not nx.check_planarity(g)[0]:
            g.remove_edge(u, v)
    return g


def candidates_random(rng, theorem, want, seen):
    out = []
    tries = 0
    while len(out) < want and tries < 20000:
        tries += 1
        g = random_planar(rng, rng.randint(3, 10), rng.uniform(0.3, 1.0))
        if not nx.is_connected(g):
            continue
        ok, emb = nx.check_planarity(g)
        fs = [f for f in faces(emb) if len(f) in ((3,) if theorem == "intersecting" else (3, 4))]
        rng.shuffle(fs)
        for f in fs:
            if len(set(f)) != len(f) or not hypotheses(g, f, theorem):
                continue
            key = (nx.weisfeiler_lehman_graph_hash(g), len(f))
            expect = clause(g, f, theorem)
            if key in seen or expect is None:
                continue
            seen.add(key)
            out.append(record(f"{theorem}-random-{len(seen)}", g, emb, f, theorem, expect))
            break
    return out


def with_outer_cycle(rng, name, length):
    """The configuration inside an outer cycle, each stub joined to a
    distinct outer vertex. Planarity with the cycle as a face is tested by
    adding an apex joined to the whole cycle."""
    c = CAT[name]
    p = pattern_graph(c)
    stubs = [v for v in sorted(c["deg"]) for _ in range(c["deg"][v] - p.degree(v))]
    outer = [f"x{i}" for i in range(length)]
    for _ in range(400):
        g = p.copy()
        nx.add_cycle(g, outer)
        ok = True
        for v in sorted(c["deg"]):
            k = c["deg"][v] - p.degree(v)
            if k > length:
                ok = False
                break
            for x in rng.sample(outer, k):
                g.add_edge(v, x)
        if not ok:
            return None
        h = g.copy()
        h.add_edges_from(("apex", x) for x in outer)
        planar, emb = nx.check_planarity(h)
        if not planar:
            continue
        emb.remove_node("apex")
        mapping = {v: i for i, v in enumerate(sorted(g.nodes(), key=lambda s: (s[0] == "x", s)))}
        g2 = nx.relabel_nodes(g, mapping)
        e2 = nx.PlanarEmbedding()
        e2.add_nodes_from(range(g2.number_of_nodes()))
        for v in emb.nodes():
            nbrs = list(emb.neighbors_cw_order(v))
            prev = None
            for w in nbrs:
                e2.add_half_edge(mapping[v], mapping[w], cw=prev) if prev is not None else e2.add_half_edge(mapping[v], mapping[w])
                prev = mapping[w]
        e2.check_structure()
        cyc = [mapping[x] for x in outer]
        fs = [f for f in faces(e2) if sorted(f) == sorted(cyc)]
        if not fs:
            continue
        return g2, e2, fs[0]
    return None


def main():
    rng = random.Random(20240611)
    fixtures = []
    for theorem, names, lengths in [
        ("pairwise3456", ["Kite", "F35"], (3, 4)),
        ("intersecting", ["Kite", "F35", "RC1-a", "RC-1", "RC-2a", "RC-2b"], (3,)),
    ]:
        seen = set()
        for name in names:
            for length in lengths:
                for attempt in range(40):
                    built = with_outer_cycle(rng, name, length)
                    if built is None:
                        break
                    g, emb, outer = built
                    if not hypotheses(g, outer, theorem):
                        continue
                    expect = clause(g, outer, theorem)
                    if expect is None or expect < 3:
                        continue
                    fixtures.append(record(f"{theorem}-{name}-in-{length}-cycle", g, emb, outer, theorem, expect))
                    seen.add((nx.weisfeiler_lehman_graph_hash(g), length))
                    break
        fixtures += candidates_random(rng, theorem, 12, seen)
    json.dump(fixtures, sys.stdout, indent=1)
    sys.stdout.write("\n")
    for f in fixtures:
        print(f["name"], f["clause"], file=sys.stderr)


if __name__ == "__main__":
    main()
