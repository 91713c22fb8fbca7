//! Named complexes used in examples and tests.

use super::SimplicialComplex;

/// The six-vertex triangulation of the real projective plane.
pub fn rp2_6() -> SimplicialComplex {
    SimplicialComplex::from_facets([
        [0u32, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ])
}

/// An 8-vertex, 17-triangle triangulation of the dunce hat.
///
/// Edges `01`, `02`, `12` carry three triangles each (the identified
/// boundary); every other edge carries two, so there is no free face.
pub fn dunce_hat() -> SimplicialComplex {
    SimplicialComplex::from_facets([
        [0u32, 1, 3],
        [0, 1, 6],
        [0, 1, 7],
        [0, 2, 3],
        [0, 2, 4],
        [0, 2, 5],
        [0, 4, 5],
        [0, 6, 7],
        [1, 2, 4],
        [1, 2, 6],
        [1, 2, 7],
        [1, 3, 4],
        [2, 3, 7],
        [2, 5, 6],
        [3, 4, 5],
        [3, 5, 7],
        [5, 6, 7],
    ])
}

/// The cone over `k` with a fresh apex one above its largest vertex.
pub fn cone_over(k: &SimplicialComplex) -> SimplicialComplex {
    let apex = k.vertices().last().map_or(0, |v| v + 1);
    let facets: Vec<Vec<u32>> = k
        .facets()
        .into_iter()
        .map(|mut f| {
            f.push(apex);
            f
        })
        .collect();
    SimplicialComplex::from_facets(facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rp2_face_numbers_and_links() {
        let k = rp2_6();
        assert_eq!(k.f_vector(), vec![6, 15, 10]);
        assert_eq!(k.euler_characteristic(), 1);
        for v in 0..6 {
            let lk = k.link(v).unwrap();
            assert_eq!(lk.f_vector(), vec![5, 5]);
            // a 5-cycle: connected and every vertex of degree 2
            for u in lk.vertices() {
                assert_eq!(lk.link(u).unwrap().num_vertices(), 2);
            }
        }
    }

    #[test]
    fn dunce_hat_shape() {
        let k = dunce_hat();
        assert_eq!(k.f_vector(), vec![8, 24, 17]);
        let mut triple = Vec::new();
        for e in k.faces_of_dim(1) {
            let deg = k.faces_of_dim(2).iter().filter(|t| super::super::is_subset(&e, t)).count();
            assert!(deg == 2 || deg == 3);
            if deg == 3 {
                triple.push(e);
            }
        }
        assert_eq!(triple, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }
}
