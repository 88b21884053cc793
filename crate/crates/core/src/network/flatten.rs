use super::MultilayerNetwork;

/// Single-layer projection of a multilayer network over all actors.
///
/// Each neighbour entry carries the number of layers that contain the edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlattenedGraph {
    adjacency: Vec<Vec<(usize, usize)>>,
    edge_count: usize,
}

impl FlattenedGraph {
    pub(super) fn from_network(net: &MultilayerNetwork) -> Self {
        let n = net.actor_count();
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (a, row) in adjacency.iter_mut().enumerate() {
            let mut all: Vec<usize> = net
                .layers()
                .iter()
                .flat_map(|l| l.neighbours(a).iter().copied())
                .collect();
            all.sort_unstable();
            for b in all {
                match row.last_mut() {
                    Some((last, count)) if *last == b => *count += 1,
                    _ => row.push((b, 1)),
                }
            }
        }
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Self { adjacency, edge_count }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&(u, _)| u)
    }

    /// Neighbours paired with the number of layers linking them to `v`.
    pub fn weighted_neighbours(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.adjacency[u]
            .binary_search_by_key(&v, |&(b, _)| b)
            .map(|i| self.adjacency[u][i].1)
            .unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&&(v, _)| u < v).map(move |&(v, _)| (u, v)))
            .collect()
    }

    /// Plain adjacency lists, for solvers that ignore multiplicity.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        self.adjacency
            .iter()
            .map(|row| row.iter().map(|&(v, _)| v).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::network::fixtures::fix_a;
    use crate::network::{network_from_edges, Hops};

    #[test]
    fn fix_a_union_of_layers() {
        let net = fix_a();
        let flat = net.squeeze();
        let named: Vec<(String, String)> = flat
            .edges()
            .into_iter()
            .map(|(u, v)| (net.actor(u).to_string(), net.actor(v).to_string()))
            .collect();
        let expect = [("a1", "a2"), ("a1", "a3"), ("a2", "a3"), ("a3", "a4")];
        assert_eq!(named.len(), 4);
        for (u, v) in expect {
            assert!(named.contains(&(u.into(), v.into())), "{u}-{v}");
        }
        assert_eq!(flat.vertex_count(), 4);
        assert_eq!(flat.multiplicity(0, 1), 2);
        assert_eq!(flat.multiplicity(2, 3), 1);
        assert_eq!(flat.multiplicity(0, 3), 0);
    }

    #[test]
    fn identical_layers_squeeze_to_one() {
        let one = network_from_edges(&[("a", "x", "y"), ("a", "y", "z")]).unwrap();
        let two = network_from_edges(&[("a", "x", "y"), ("a", "y", "z"), ("b", "x", "y"), ("b", "y", "z")]).unwrap();
        assert_eq!(one.squeeze().edges(), two.squeeze().edges());
        assert_eq!(one.squeeze().edges().len(), one.layer(0).edge_count());
    }

    #[test]
    fn flattened_degree_is_neighbourhood_size() {
        let net = fix_a();
        let flat = net.squeeze();
        for a in 0..net.actor_count() {
            assert_eq!(flat.degree(a), net.neighbourhood_size(a, Hops::One));
        }
        assert!(flat.edge_count() <= net.stats().edge_count);
    }
}
