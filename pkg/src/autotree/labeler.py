"""Individualization-refinement search: canonical labeling plus automorphism
generators for a colored (sub)graph.

The search tree refines the input coloring, then repeatedly individualizes
every vertex of the first non-singleton cell. Leaves are discrete colorings,
read as labelings. Three prunings keep the tree small: subtrees whose node
invariant differs from the leftmost path and is worse than the best path are
cut (P_A and P_B), and target vertices in the same discovered orbit as an
already-explored sibling are skipped when the discovered automorphisms fix
the current individualization sequence pointwise (P_C). The result is the
leaf with the lexicographically smallest (invariant path, certificate) pair.
"""

from __future__ import annotations

from .graphs import CanonicalForm, InternalConsistencyError
from .refine import individualize, refine_cells


def _quotient_invariant(adj, cells):
    """Cell sizes plus cell-to-cell edge counts of a refined coloring."""
    cell_of = {}
    for i, cell in enumerate(cells):
        for v in cell:
            cell_of[v] = i
    counts = {}
    for u in cell_of:
        cu = cell_of[u]
        for w in adj[u]:
            if u < w:
                cw = cell_of[w]
                key = (cu, cw) if cu <= cw else (cw, cu)
                counts[key] = counts.get(key, 0) + 1
    return (tuple(len(c) for c in cells), tuple(sorted(counts.items())))


def _leaf_certificate(adj, cells, input_pos):
    """Labeling and certificate of a discrete coloring.

    Labels are positions in the discrete coloring; certificate colors are the
    vertex positions in the original input coloring, so certificates of
    differently-colored carriers never collide.
    """
    gamma = {}
    for i, cell in enumerate(cells):
        gamma[cell[0]] = i
    colors = tuple(input_pos[cell[0]] for cell in cells)
    edges = []
    for u, lu in gamma.items():
        for w in adj[u]:
            if u < w:
                lw = gamma[w]
                edges.append((lu, lw) if lu < lw else (lw, lu))
    return gamma, (colors, tuple(sorted(edges)))


def _verify_generator(adj, input_pos, sigma):
    """Check that sigma preserves adjacency and input colors."""
    for v, img in sigma.items():
        if input_pos[v] != input_pos[img]:
            raise InternalConsistencyError("generator moves %d across cells" % v)
        if sorted(sigma[w] for w in adj[v]) != sorted(adj[img]):
            raise InternalConsistencyError("generator breaks adjacency at %d" % v)


class _Search:
    def __init__(self, adj, input_pos):
        self.adj = adj
        self.input_pos = input_pos
        self.ref_path = None
        self.ref_cert = None
        self.ref_gamma = None
        self.best = None  # (phi_path, cert, gamma)
        self.gens = []
        self._gen_keys = set()
        self.nodes_visited = 0

    def run(self, root_cells):
        phi = _quotient_invariant(self.adj, root_cells)
        self._descend(root_cells, (phi,), ())
        return self.best

    def _descend(self, cells, phi_path, nu):
        self.nodes_visited += 1
        if self.ref_path is not None:
            d = len(phi_path)
            matches_ref = phi_path == self.ref_path[:d]
            if not matches_ref and phi_path > self.best[0][:d]:
                return
        target = None
        for cell in cells:
            if len(cell) > 1:
                target = cell
                break
        if target is None:
            self._leaf(cells, phi_path)
            return
        tried = []
        gen_mark = -1
        parent = {}
        for v in target:
            if tried:
                if gen_mark != len(self.gens):
                    parent = self._orbit_forest(nu)
                    gen_mark = len(self.gens)
                root_v = _find(parent, v)
                if any(_find(parent, u) == root_v for u in tried):
                    continue
            tried.append(v)
            child_cells, at = individualize(cells, v)
            refined = refine_cells(self.adj, child_cells, active=[at])
            phi = _quotient_invariant(self.adj, refined)
            self._descend(refined, phi_path + (phi,), nu + (v,))

    def _orbit_forest(self, nu):
        parent = {}
        fixed = set(nu)
        for g in self.gens:
            if all(g[x] == x for x in fixed):
                for v, img in g.items():
                    a, b = _find(parent, v), _find(parent, img)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        return parent

    def _leaf(self, cells, phi_path):
        gamma, cert = _leaf_certificate(self.adj, cells, self.input_pos)
        if self.ref_path is None:
            self.ref_path = phi_path
            self.ref_cert = cert
            self.ref_gamma = gamma
            self.best = (phi_path, cert, gamma)
            return
        if cert == self.ref_cert:
            self._record_automorphism(self.ref_gamma, gamma)
        elif cert == self.best[1]:
            self._record_automorphism(self.best[2], gamma)
        if (phi_path, cert) < (self.best[0], self.best[1]):
            self.best = (phi_path, cert, gamma)

    def _record_automorphism(self, gamma_a, gamma_b):
        by_label = {}
        for v, lab in gamma_b.items():
            by_label[lab] = v
        sigma = {v: by_label[lab] for v, lab in gamma_a.items()}
        if all(v == img for v, img in sigma.items()):
            return
        key = tuple(sorted(sigma.items()))
        if key in self._gen_keys:
            return
        _verify_generator(self.adj, self.input_pos, sigma)
        self._gen_keys.add(key)
        self.gens.append(sigma)


def _find(parent, x):
    root = x
    while parent.get(root, root) != root:
        root = parent[root]
    while parent.get(x, x) != x:
        parent[x], x = root, parent[x]
    return root


def canonical_labeling_ir(adj, cells):
    """Canonically label a colored graph by individualization-refinement.

    adj maps vertices to neighbors inside the carrier; cells is the input
    ordered partition (any vertex ids). Returns (gamma, form, generators):
    gamma maps each vertex to a label in 0..k-1, form is the certificate of
    the relabeled graph (colors taken from input cell positions), and
    generators are verified automorphism dicts of the colored carrier.
    """
    cells = [list(c) for c in cells]
    if not cells:
        return {}, CanonicalForm([], []), []
    input_pos = {}
    offset = 0
    for cell in cells:
        for v in cell:
            input_pos[v] = offset
        offset += len(cell)

    root_cells = refine_cells(adj, cells)
    search = _Search(adj, input_pos)
    best = search.run(root_cells)
    _, (colors, edges), gamma = best
    form = CanonicalForm(
        [(lab, colors[lab]) for lab in range(len(colors))], edges)
    return dict(gamma), form, search.gens
