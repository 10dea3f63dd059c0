use crate::graph::{Digraph, Graph, VertexPartition};

/// A permutation `perm` with `h = g.permuted(perm)`, i.e.
/// `h(u,v) = g(perm[u], perm[v])`. With a partition, `perm` must map every
/// class onto itself.
pub fn find_isomorphism(g: &Graph, h: &Graph, partition: Option<&VertexPartition>) -> Option<Vec<usize>> {
    let n = g.order();
    if h.order() != n || g.edge_count() != h.edge_count() {
        return None;
    }
    let (dg, dh) = (g.degrees(), h.degrees());
    let class = partition.map(VertexPartition::class_of);
    let allowed = |u: usize, x: usize| dh[u] == dg[x] && class.as_ref().is_none_or(|c| c[u] == c[x]);
    search(n, &allowed, &|u, v, x, y| h.has_edge(u, v) == g.has_edge(x, y))
}

/// Digraph version of [`find_isomorphism`] on arcs.
pub fn find_digraph_isomorphism(g: &Digraph, h: &Digraph, partition: Option<&VertexPartition>) -> Option<Vec<usize>> {
    let n = g.order();
    if h.order() != n {
        return None;
    }
    let key = |d: &Digraph, v: usize| (d.out_degree(v), d.in_degree(v));
    let class = partition.map(VertexPartition::class_of);
    let allowed = |u: usize, x: usize| key(h, u) == key(g, x) && class.as_ref().is_none_or(|c| c[u] == c[x]);
    search(n, &allowed, &|u, v, x, y| h.has_arc(u, v) == g.has_arc(x, y) && h.has_arc(v, u) == g.has_arc(y, x))
}

fn search(
    n: usize,
    allowed: &dyn Fn(usize, usize) -> bool,
    consistent: &dyn Fn(usize, usize, usize, usize) -> bool,
) -> Option<Vec<usize>> {
    fn rec(
        u: usize,
        n: usize,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        allowed: &dyn Fn(usize, usize) -> bool,
        consistent: &dyn Fn(usize, usize, usize, usize) -> bool,
    ) -> bool {
        if u == n {
            return true;
        }
        for x in 0..n {
            if used[x] || !allowed(u, x) || !(0..u).all(|v| consistent(u, v, x, perm[v])) {
                continue;
            }
            used[x] = true;
            perm.push(x);
            if rec(u + 1, n, perm, used, allowed, consistent) {
                return true;
            }
            perm.pop();
            used[x] = false;
        }
        false
    }
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    rec(0, n, &mut perm, &mut used, allowed, consistent).then_some(perm)
}
