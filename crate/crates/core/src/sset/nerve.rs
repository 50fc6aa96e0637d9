use std::sync::Arc;

use super::product::fiber_product;
use super::{builtin, FiniteSimplicialSet, FormalSimplex, SimplicialMap, SsetReport, TupleSet};
use crate::error::{Error, Result};

/// Levels `X_0 .. X_P` of a nerve with face maps `∂_i: X_p -> X_{p-1}` and
/// degeneracy maps `s_i: X_p -> X_{p+1}`, each level truncated at dimension `D`.
#[derive(Clone, Debug)]
pub struct SimplicialObject {
    pub base: Arc<FiniteSimplicialSet>,
    pub levels: Vec<Arc<TupleSet>>,
    /// `faces[p][i]`; `faces[0]` is empty.
    pub faces: Vec<Vec<SimplicialMap>>,
    /// `degeneracies[p][i]` for `p < P`.
    pub degeneracies: Vec<Vec<SimplicialMap>>,
    pub truncation: usize,
}

impl SimplicialObject {
    pub fn p_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, p: usize) -> &Arc<FiniteSimplicialSet> {
        &self.levels[p].set
    }
}

/// `X_p = X ×_Y ... ×_Y X` (`p + 1` factors) for a levelwise surjective `f`.
pub fn nerve_of_map(f: &SimplicialMap, p_max: usize, d: usize) -> Result<SimplicialObject> {
    if let Some((n, c)) = f.missed_cell(d) {
        return Err(Error::NotSurjective(format!("cell `{}` of dimension {n} has no nondegenerate preimage", f.target.name(n, c))));
    }
    let mut levels = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let maps = vec![f; p + 1];
        levels.push(Arc::new(fiber_product(&maps, d)?));
    }
    let mut faces = vec![Vec::new()];
    for p in 1..=p_max {
        faces.push(
            (0..=p)
                .map(|i| {
                    levels[p].map_to(&levels[p - 1], &|t: &[FormalSimplex]| {
                        let mut v = t.to_vec();
                        v.remove(i);
                        v
                    })
                })
                .collect(),
        );
    }
    let degeneracies = (0..p_max)
        .map(|p| {
            (0..=p)
                .map(|i| {
                    levels[p].map_to(&levels[p + 1], &|t: &[FormalSimplex]| {
                        let mut v = t.to_vec();
                        v.insert(i, t[i]);
                        v
                    })
                })
                .collect()
        })
        .collect();
    Ok(SimplicialObject { base: f.target.clone(), levels, faces, degeneracies, truncation: d })
}

/// The nerve of `S -> point`: `c_p(S) = S^{p+1}`.
pub fn cech_nerve(s: &Arc<FiniteSimplicialSet>, p_max: usize, d: usize) -> Result<SimplicialObject> {
    let point = Arc::new(builtin("point")?);
    let images = (0..=s.dim())
        .map(|n| {
            let m = if n == 0 { 0 } else { (1u64 << n) - 1 };
            vec![FormalSimplex { cell_dim: 0, cell: 0, degens: m }; s.count(n)]
        })
        .collect();
    let f = SimplicialMap::new(s.clone(), point, images)?;
    nerve_of_map(&f, p_max, d)
}

/// Violated simplicial identities among the face and degeneracy maps.
pub fn validate_simplicial_object(x: &SimplicialObject) -> SsetReport {
    let mut violations = Vec::new();
    let same = |a: &SimplicialMap, b: &SimplicialMap| a.images == b.images;
    let p_max = x.p_max();
    // ∂_i ∂_j = ∂_{j-1} ∂_i on X_p, i < j
    for p in 2..=p_max {
        for j in 1..=p {
            for i in 0..j {
                let lhs = x.faces[p][j].then(&x.faces[p - 1][i]);
                let rhs = x.faces[p][i].then(&x.faces[p - 1][j - 1]);
                if !same(&lhs, &rhs) {
                    violations.push(format!("∂{i}∂{j} ≠ ∂{}∂{i} on X_{p}", j - 1));
                }
            }
        }
    }
    // s_i s_j = s_{j+1} s_i on X_p, i <= j
    for p in 0..p_max.saturating_sub(1) {
        for j in 0..=p {
            for i in 0..=j {
                let lhs = x.degeneracies[p][j].then(&x.degeneracies[p + 1][i]);
                let rhs = x.degeneracies[p][i].then(&x.degeneracies[p + 1][j + 1]);
                if !same(&lhs, &rhs) {
                    violations.push(format!("s{i}s{j} ≠ s{}s{i} on X_{p}", j + 1));
                }
            }
        }
    }
    // ∂_i s_j on X_p
    for p in 0..p_max {
        for j in 0..=p {
            for i in 0..=p + 1 {
                let lhs = x.degeneracies[p][j].then(&x.faces[p + 1][i]);
                let ok = if i == j || i == j + 1 {
                    lhs.images == SimplicialMap::identity(x.levels[p].set.clone()).images
                } else if i < j {
                    same(&lhs, &x.faces[p][i].then(&x.degeneracies[p - 1][j - 1]))
                } else {
                    same(&lhs, &x.faces[p][i - 1].then(&x.degeneracies[p - 1][j]))
                };
                if !ok {
                    violations.push(format!("∂{i}s{j} identity fails on X_{p}"));
                }
            }
        }
    }
    SsetReport { violations }
}

#[cfg(test)]
mod tests {
    use super::super::{product, projection, validate_map};
    use super::*;

    fn arc(name: &str) -> Arc<FiniteSimplicialSet> {
        Arc::new(builtin(name).unwrap())
    }

    #[test]
    fn cech_nerve_of_circle() {
        let s = arc("sphere1");
        let x = cech_nerve(&s, 2, 2).unwrap();
        assert_eq!(x.level(0).counts(), vec![3, 3]);
        assert_eq!(x.level(1).counts(), vec![9, 27, 18]);
        assert!(validate_simplicial_object(&x).is_valid());
        for maps in x.faces.iter().chain(&x.degeneracies) {
            for m in maps {
                assert!(validate_map(m).is_valid());
            }
        }
    }

    #[test]
    fn identity_nerve_is_constant() {
        let s = arc("sphere1");
        let x = nerve_of_map(&SimplicialMap::identity(s.clone()), 2, 1).unwrap();
        for p in 0..=2 {
            assert_eq!(x.level(p).counts(), s.counts());
        }
        assert!(validate_simplicial_object(&x).is_valid());
    }

    #[test]
    fn trivial_bundle_levels() {
        let s = arc("sphere1");
        let t = Arc::new(product(&s, &s, 2).unwrap());
        let f = projection(&t, 0);
        let x = nerve_of_map(&f, 1, 2).unwrap();
        let expected = product(&s, &Arc::new(product(&s, &s, 3).unwrap().set.as_ref().clone()), 2).unwrap();
        assert_eq!(x.level(1).counts(), expected.set.counts());
        assert!(validate_simplicial_object(&x).is_valid());
    }

    #[test]
    fn non_surjective_map_is_refused() {
        let point = arc("point");
        let s = arc("sphere1");
        let images = vec![vec![FormalSimplex::nondegenerate(0, 0)]];
        let f = SimplicialMap::new(point, s, images).unwrap();
        assert!(matches!(nerve_of_map(&f, 1, 1), Err(Error::NotSurjective(_))));
    }
}
