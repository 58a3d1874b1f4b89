import itertools

from core.database import Database
from engine.naive import naive_eval
from query.binding import bind_query
from query.parser import parse_query


def id_db(tables, domain_size=None):
    """{name: (schema, rows)} -> Database over one shared "id" domain."""
    return Database.from_id_relations(tables, domain_size)


def all_tuples(domain, arity):
    return list(itertools.product(domain, repeat=arity))


def bound(text, db):
    return bind_query(parse_query(text), db)


def untangled_answers(untangled):
    out = set()
    for disjunct in untangled.disjuncts:
        out |= naive_eval(disjunct, untangled.database)
    return out


# -------------------------------------------------
# graph oracles (plain DFS over an adjacency map)
# -------------------------------------------------

def adjacency(rows):
    adj = {}
    for u, v in rows:
        adj.setdefault(u, set()).add(v)
    return adj


def walk_endpoints(rows, k):
    adj = adjacency(rows)
    frontier = {(u, u) for u in adj}
    for _ in range(k):
        frontier = {(s, w) for s, u in frontier for w in adj.get(u, ())}
    return frontier


def path_endpoints(rows, k, induced=False):
    adj = adjacency(rows)
    out = set()

    def extend(path):
        if len(path) == k + 1:
            out.add((path[0], path[-1]))
            return
        for w in adj.get(path[-1], ()):
            if w in path:
                continue
            if induced and any(w in adj.get(u, ()) or u in adj.get(w, ()) for u in path[:-1]):
                continue
            extend(path + [w])

    for u in adj:
        extend([u])
    return out
