"""Abstract snake and band graphs, their matchings, and transfer matrices.

A snake graph is a row of unit square tiles glued north or east. Every
edge carries a variable label. The two computation routes implemented
here, summing over perfect matchings and multiplying 2x2 transfer
matrices, must agree exactly; a slower exhaustive matcher is kept as an
independent oracle.

Grid conventions (frozen, everything else depends on them):

  * tile 0 sits at the origin, tile j+1 is one step north or east of
    tile j; the heading starts east and flips at step j exactly when
    shape letter j repeats the letter two positions earlier (with the
    word padded by two norths);
  * the south edge of tile 0 is corner ``a`` and the west edge corner
    ``b``;
  * a north glue step puts the glue label on the shared horizontal edge,
    the next diagonal label on the east edge of the lower tile, and the
    previous diagonal label on the west edge of the upper tile; an east
    glue step is the mirror image;
  * on the last tile, corner ``w`` is the north edge and ``z`` the east
    edge when the number of tiles is odd, and the other way around when
    it is even.
"""

from __future__ import annotations

import itertools

from .algebra import Mat2, Mono, Poly

NORTH = "N"
EAST = "E"


class SnakeError(ValueError):
    pass


class LengthMismatch(SnakeError):
    """Label or shape sequences of inconsistent lengths."""


class DegenerateBand(SnakeError):
    """Band graphs need at least two tiles."""


def _x(vid, exp2=2):
    return Poly.from_mono(Mono({vid: exp2}))


def _curly(vid, exp2=2):
    """The per-tile coefficient variable attached to a diagonal label."""
    return ("Y", vid[1])


def _edge_key(v1, v2):
    return tuple(sorted((v1, v2)))


class SnakeGraph:
    """A labelled snake graph on ``d`` tiles.

    ``diagonals`` has length d, ``shapes`` and ``glue_labels`` length
    d - 1. All labels are variable ids (kind, label) with kind "x" or
    "b".
    """

    def __init__(self, diagonals, shapes, glue_labels,
                 corner_a, corner_b, corner_w, corner_z):
        self.diagonals = tuple(diagonals)
        self.shapes = tuple(shapes)
        self.glue_labels = tuple(glue_labels)
        self.corner_a = corner_a
        self.corner_b = corner_b
        self.corner_w = corner_w
        self.corner_z = corner_z
        d = len(self.diagonals)
        if d < 1:
            raise LengthMismatch("a snake graph needs at least one tile")
        if len(self.shapes) != d - 1:
            raise LengthMismatch(
                "expected %d shapes, got %d" % (d - 1, len(self.shapes)))
        if len(self.glue_labels) != d - 1:
            raise LengthMismatch(
                "expected %d glue labels, got %d"
                % (d - 1, len(self.glue_labels)))
        for s in self.shapes:
            if s not in (NORTH, EAST):
                raise SnakeError("bad shape %r" % (s,))
        self._build()

    @property
    def d(self):
        return len(self.diagonals)

    def _tile_sides(self, j):
        px, py = self.positions[j]
        return {
            "S": _edge_key((px, py), (px + 1, py)),
            "W": _edge_key((px, py), (px, py + 1)),
            "N": _edge_key((px, py + 1), (px + 1, py + 1)),
            "E": _edge_key((px + 1, py), (px + 1, py + 1)),
        }

    def _build(self):
        d = self.d
        # The shape word does not give grid steps directly: the grid
        # changes direction at step j exactly when the shape letter two
        # steps back (padded with NORTH) repeats. This reconciliation was
        # found by matching the matrix product against exhaustive
        # matching sums over all words up to four tiles.
        padded = (NORTH, NORTH) + self.shapes
        dirs = []
        heading = EAST
        for j in range(d - 1):
            if padded[j + 2] == padded[j]:
                heading = NORTH if heading == EAST else EAST
            dirs.append(heading)
        self.grid_dirs = tuple(dirs)
        pos = [(0, 0)]
        for s in dirs:
            px, py = pos[-1]
            pos.append((px, py + 1) if s == NORTH else (px + 1, py))
        self.positions = pos
        labels = {}

        def put(key, label):
            labels[key] = label

        first = self._tile_sides(0)
        put(first["S"], self.corner_a)
        put(first["W"], self.corner_b)
        for j in range(d - 1):
            lo = self._tile_sides(j)
            hi = self._tile_sides(j + 1)
            if self.grid_dirs[j] == NORTH:
                put(lo["N"], self.glue_labels[j])
                put(lo["E"], self.diagonals[j + 1])
                put(hi["W"], self.diagonals[j])
            else:
                put(lo["E"], self.glue_labels[j])
                put(lo["N"], self.diagonals[j + 1])
                put(hi["S"], self.diagonals[j])
        last = self._tile_sides(d - 1)
        if d % 2 == 1:
            put(last["N"], self.corner_w)
            put(last["E"], self.corner_z)
        else:
            put(last["E"], self.corner_w)
            put(last["N"], self.corner_z)
        self.edge_labels = labels
        self.glue_keys = tuple(
            self._tile_sides(j)["N" if self.grid_dirs[j] == NORTH else "E"]
            for j in range(d - 1))
        self.edge_key_a = first["S"]
        self.edge_key_b = first["W"]
        self.edge_key_w = last["N"] if d % 2 == 1 else last["E"]
        self.edge_key_z = last["E"] if d % 2 == 1 else last["N"]
        verts = set()
        for key in labels:
            verts.update(key)
        self.vertices = sorted(verts)
        inc = {v: [] for v in self.vertices}
        for key in sorted(labels):
            for v in key:
                inc[v].append(key)
        self._incidence = inc

    # -- matchings ---------------------------------------------------------

    def _match_rec(self, keys_available, covered, chosen, out):
        free = [v for v in self.vertices if v not in covered]
        if not free:
            out.append(frozenset(chosen))
            return
        v = free[0]
        for key in self._incidence[v]:
            if key in keys_available and not (set(key) & covered):
                self._match_rec(keys_available, covered | set(key),
                                chosen + [key], out)

    def perfect_matchings(self, rel=1):
        """All perfect matchings, minimal first, in a deterministic order."""
        out = []
        self._match_rec(set(self.edge_labels), set(), [], out)
        minimal = self.minimal_matching(rel)
        return sorted(out, key=lambda m: self._order_key(m, minimal))

    def _order_key(self, m, minimal):
        h = self.height_mono(m, minimal)
        return (h.degree2(), h.items(), sorted(m))

    def matchings_by_exhaustion(self):
        """Independent oracle enumerator.

        Small graphs filter raw edge subsets; larger ones use an
        include/exclude recursion over the sorted edge list with dead-end
        pruning. Output order is by sorted edge sets, not matching order.
        """
        keys = sorted(self.edge_labels)
        n = len(self.vertices)
        if self.d <= 6:
            found = []
            for combo in itertools.combinations(keys, n // 2):
                seen = set()
                ok = True
                for key in combo:
                    if set(key) & seen:
                        ok = False
                        break
                    seen.update(key)
                if ok and len(seen) == n:
                    found.append(frozenset(combo))
            return sorted(found, key=sorted)
        found = []

        def rec(i, covered, chosen):
            if len(covered) == n:
                found.append(frozenset(chosen))
                return
            if i == len(keys):
                return
            # prune: every vertex only incident to already-skipped edges
            # can no longer be covered
            remaining = keys[i:]
            for v in self.vertices:
                if v not in covered and not any(v in k for k in remaining):
                    return
            rec(i + 1, covered, chosen)
            key = keys[i]
            if not (set(key) & covered):
                rec(i + 1, covered | set(key), chosen + [key])

        rec(0, set(), [])
        return sorted(found, key=sorted)

    def minimal_matching(self, rel=1):
        """The all-boundary matching singled out by the orientation bit.

        With rel = +1 it is the one containing the corner ``a`` edge,
        with rel = -1 the other one.
        """
        if rel not in (1, -1):
            raise SnakeError("rel must be +1 or -1")
        boundary = set(self.edge_labels) - set(self.glue_keys)
        out = []
        self._match_rec(boundary, set(), [], out)
        if len(out) != 2:
            raise SnakeError(
                "expected exactly 2 all-boundary matchings, found %d"
                % len(out))
        with_a = [m for m in out if self.edge_key_a in m]
        without = [m for m in out if self.edge_key_a not in m]
        if len(with_a) != 1:
            raise SnakeError("corner edge classification failed")
        return with_a[0] if rel == 1 else without[0]

    def weight_mono(self, matching):
        m = Mono.unit()
        for key in matching:
            m = m.mul(Mono({self.edge_labels[key]: 2}))
        return m

    def height_mono(self, matching, minimal):
        """Height of a matching relative to the minimal one.

        The symmetric difference is a union of cycles; a tile contributes
        its diagonal's coefficient variable once per enclosing cycle,
        detected by an even-odd ray cast from the tile center.
        """
        diff = set(matching) ^ set(minimal)
        verticals = [key for key in diff if key[0][0] == key[1][0]]
        out = Mono.unit()
        for j in range(self.d):
            px, py = self.positions[j]
            hits = sum(1 for (v1, v2) in verticals
                       if v1[0] > px and min(v1[1], v2[1]) == py)
            if hits % 2:
                out = out.mul(Mono({_curly(self.diagonals[j]): 2}))
        return out

    def crossing_mono(self):
        m = Mono.unit()
        for vid in self.diagonals:
            m = m.mul(Mono({vid: 2}))
        return m

    def corner_partition_sums(self, rel=1):
        """Split the matching sum by which corner edges a matching uses.

        Every perfect matching contains exactly one of the two first-tile
        corner edges (a or b) and exactly one of the last-tile corner
        edges (w or z). The four partial sums, each divided by its own
        normalizing monomial, reproduce the four entries of the transfer
        matrix: returns (top_left, top_right, bottom_left, bottom_right)
        for the classes using (a,w), (b,w), (a,z), (b,z) respectively.
        """
        minimal = self.minimal_matching(rel)
        sums = {"aw": Poly.zero(), "bw": Poly.zero(),
                "az": Poly.zero(), "bz": Poly.zero()}
        for m in self.perfect_matchings(rel):
            key = ("a" if self.edge_key_a in m else "b") + \
                  ("w" if self.edge_key_w in m else "z")
            sums[key] = sums[key] + Poly.from_mono(
                self.weight_mono(m).mul(self.height_mono(m, minimal)))
        def prod(vids):
            m = Mono.unit()
            for v in vids:
                m = m.mul(Mono({v: 2}))
            return m

        drop_last = prod(self.diagonals[:-1])
        drop_first = prod(self.diagonals[1:])
        drop_both = prod(self.diagonals[1:-1])
        full = prod(self.diagonals)
        ylast = Mono({_curly(self.diagonals[-1]): 2})
        den_aw = drop_last.mul(Mono({self.corner_a: 2, self.corner_w: 2}))
        den_bw = drop_both.mul(Mono({self.corner_b: 2, self.corner_w: 2}))
        den_az = full.mul(
            Mono({self.corner_a: 2, self.corner_z: 2})).mul(ylast)
        den_bz = drop_first.mul(
            Mono({self.corner_b: 2, self.corner_z: 2})).mul(ylast)
        return (sums["aw"].div_mono(den_aw),
                sums["bw"].div_mono(den_bw),
                sums["az"].div_mono(den_az),
                sums["bz"].div_mono(den_bz))

    # -- matrix route ------------------------------------------------------

    def step_matrix(self, j):
        """Transfer factor between tiles j and j+1 (0-indexed)."""
        di, dj = self.diagonals[j], self.diagonals[j + 1]
        g = self.glue_labels[j]
        y = Poly.from_mono(Mono({_curly(di): 2}))
        first_kind = (self.shapes[j] == NORTH if j == 0
                      else self.shapes[j] == self.shapes[j - 1])
        if first_kind:
            frac = Poly.from_mono(Mono({g: 2, di: -2, dj: -2}))
            return Mat2(1, 0, frac, y)
        return Mat2(
            Poly.from_mono(Mono({dj: 2, di: -2})),
            Poly.from_mono(Mono({g: 2})) * y,
            0,
            Poly.from_mono(Mono({di: 2, dj: -2})) * y,
        )

    def transfer_matrix(self):
        m = Mat2.identity()
        for j in range(self.d - 1):
            m = self.step_matrix(j) * m
        return m

    def enumerator_by_matrices(self):
        """Crossing monomial times the upper-right product entry."""
        d = self.d
        i1, idd = self.diagonals[0], self.diagonals[-1]
        ylast = Poly.from_mono(Mono({_curly(idd): 2}))
        upper = Mat2(
            Poly.from_mono(Mono({self.corner_w: 2, idd: -2})),
            _x(self.corner_z) * ylast,
            -_x(self.corner_z, -2),
            0,
        )
        lower = Mat2(
            0,
            _x(self.corner_a),
            -_x(self.corner_a, -2),
            Poly.from_mono(Mono({self.corner_b: 2, i1: -2})),
        )
        prod = upper * self.transfer_matrix() * lower
        return Poly.from_mono(self.crossing_mono()) * prod.upper_right()

    def enumerator_by_matchings(self, rel=1):
        minimal = self.minimal_matching(rel)
        total = Poly.zero()
        for m in self.perfect_matchings(rel):
            total = total + Poly.from_mono(
                self.weight_mono(m).mul(self.height_mono(m, minimal)))
        return total

    # -- output ------------------------------------------------------------

    def to_dot(self):
        lines = ["graph snake {", "  node [shape=point];"]
        for v in self.vertices:
            lines.append('  "%d,%d";' % v)
        for key in sorted(self.edge_labels):
            (x1, y1), (x2, y2) = key
            lines.append('  "%d,%d" -- "%d,%d" [label="%s:%s"];'
                         % (x1, y1, x2, y2, *self.edge_labels[key]))
        for j in range(self.d):
            px, py = self.positions[j]
            lines.append('  "%d,%d" -- "%d,%d" [style=dashed, label="%s:%s"];'
                         % (px, py + 1, px + 1, py, *self.diagonals[j]))
        lines.append("}")
        return "\n".join(lines) + "\n"


class BandGraph:
    """A band graph: a snake graph with its two cut edges identified.

    Constructed from the diagonal labels, shape word, glue labels and the
    single cut label. The underlying snake carries the band labelling:
    corner b holds the last diagonal, corner w the first diagonal, and
    corners a and z both hold the cut label.
    """

    def __init__(self, diagonals, shapes, glue_labels, cut_label):
        if len(tuple(diagonals)) < 2:
            raise DegenerateBand(
                "band graphs need at least two tiles; expand the curve "
                "description or declare the loop contractible")
        self.cut_label = cut_label
        self.base = SnakeGraph(
            diagonals, shapes, glue_labels,
            corner_a=cut_label,
            corner_b=tuple(diagonals)[-1],
            corner_w=tuple(diagonals)[0],
            corner_z=cut_label,
        )
        base = self.base
        d = base.d
        self.edge_key_cut = base.edge_key_a
        self.edge_key_cut_partner = base.edge_key_z
        px, py = base.positions[-1]
        self.vertex_x_partner = (px + 1, py + 1)
        self.vertex_y_partner = (px + 1, py) if d % 2 == 1 else (px, py + 1)

    @property
    def d(self):
        return self.base.d

    def _classify(self, matching):
        base = self.base
        has_a = base.edge_key_a in matching
        has_w = base.edge_key_w in matching
        if has_a and has_w:
            return "A"
        if not has_a and has_w:
            return "B"
        if has_a and not has_w:
            return "C"
        return "D"

    def good_matchings(self, rel=1):
        """Good matchings descended from the base snake's matchings.

        Returns a list of (edge set, weight, height) triples; edge sets
        use the base snake's edge keys with one cut copy removed. Class B
        (first-corner b together with w) never descends.
        """
        base = self.base
        minimal = base.minimal_matching(rel)
        out = []
        for m in base.perfect_matchings(rel):
            cls = self._classify(m)
            if cls == "B":
                continue
            if cls in ("A", "C"):
                edges = frozenset(m - {base.edge_key_a})
            else:
                edges = frozenset(m - {base.edge_key_z})
            weight = base.weight_mono(m).mul(Mono({self.cut_label: -2}))
            out.append((edges, weight, base.height_mono(m, minimal)))
        return out

    def enumerator_by_matchings(self, rel=1):
        total = Poly.zero()
        for _, w, h in self.good_matchings(rel):
            total = total + Poly.from_mono(w.mul(h))
        return total

    def enumerator_by_matrices(self):
        base = self.base
        i1, idd = base.diagonals[0], base.diagonals[-1]
        ylast = Poly.from_mono(Mono({_curly(idd): 2}))
        closing = Mat2(
            Poly.from_mono(Mono({i1: 2, idd: -2})),
            _x(self.cut_label) * ylast,
            0,
            ylast * Poly.from_mono(Mono({idd: 2, i1: -2})),
        )
        prod = closing * base.transfer_matrix()
        return Poly.from_mono(base.crossing_mono()) * prod.trace()

    def good_matchings_by_exhaustion(self):
        """Oracle: matchings of the identified graph, filtered directly.

        Works on the actual band graph (vertices of the cut partners
        merged, the two cut copies identified into one edge) and keeps a
        matching when it uses the cut edge or when its edges at the two
        cut vertices lie on a common side of the cut. Returns sorted
        (edge set, weight) pairs; heights are checked through the matrix
        route instead.
        """
        base = self.base
        vmap = {v: v for v in base.vertices}
        vmap[self.vertex_x_partner] = (0, 0)
        vmap[self.vertex_y_partner] = (1, 0)
        cut_id = "cut"

        def edge_id(key):
            if key in (base.edge_key_a, base.edge_key_z):
                return cut_id
            return key

        edges = {}
        for key, label in base.edge_labels.items():
            eid = edge_id(key)
            pair = frozenset(vmap[v] for v in key)
            edges[eid] = (pair, label)
        vertices = sorted({v for pair, _ in edges.values() for v in pair})
        incidence = {v: [] for v in vertices}
        for eid in sorted(edges, key=str):
            for v in edges[eid][0]:
                incidence[v].append(eid)

        found = []

        def rec(covered, chosen):
            free = [v for v in vertices if v not in covered]
            if not free:
                found.append(frozenset(chosen))
                return
            v = free[0]
            for eid in incidence[v]:
                pair = edges[eid][0]
                if not (pair & covered):
                    rec(covered | pair, chosen + [eid])

        rec(set(), [])

        last_side = set()
        for key in base.edge_labels:
            if self.vertex_x_partner in key or self.vertex_y_partner in key:
                last_side.add(edge_id(key))

        good = []
        for m in found:
            if cut_id in m:
                good.append(m)
                continue
            at_x = [e for e in m if (0, 0) in edges[e][0]]
            at_y = [e for e in m if (1, 0) in edges[e][0]]
            ex, ey = at_x[0], at_y[0]
            if (ex in last_side) == (ey in last_side):
                good.append(m)
        out = []
        for m in good:
            w = Mono.unit()
            for eid in m:
                w = w.mul(Mono({edges[eid][1]: 2}))
            out.append((m, w))
        return sorted(out, key=lambda it: sorted(map(str, it[0])))

    def to_dot(self):
        base = self.base
        lines = base.to_dot().rstrip("}\n").split("\n")
        lines.append('  // cut edge: the copies below are identified')
        for key in (base.edge_key_a, base.edge_key_z):
            (x1, y1), (x2, y2) = key
            lines.append('  "%d,%d" -- "%d,%d" [style=bold, color=red];'
                         % (x1, y1, x2, y2))
        lines.append("}")
        return "\n".join(lines) + "\n"
