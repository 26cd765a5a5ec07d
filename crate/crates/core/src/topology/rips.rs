//! Vietoris–Rips complexes and their homology over the two-element field.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A simplicial complex, simplices stored as sorted vertex lists per
/// dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplexZ2 {
    pub simplices: Vec<Vec<Vec<u32>>>,
}

impl SimplicialComplexZ2 {
    pub fn vertex_count(&self) -> usize {
        self.simplices.first().map_or(0, Vec::len)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.get(dim).map_or(0, Vec::len)
    }

    pub fn max_dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    /// Boundary of dimension-`dim` simplices as columns of row indices into
    /// dimension `dim - 1`, each sorted.
    pub fn boundary(&self, dim: usize) -> Vec<Vec<u32>> {
        if dim == 0 || dim >= self.simplices.len() {
            return Vec::new();
        }
        let index: BTreeMap<&[u32], u32> =
            self.simplices[dim - 1].iter().enumerate().map(|(i, s)| (s.as_slice(), i as u32)).collect();
        self.simplices[dim]
            .iter()
            .map(|s| {
                let mut col: Vec<u32> = (0..s.len())
                    .map(|drop| {
                        let face: Vec<u32> = s.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, v)| *v).collect();
                        index[face.as_slice()]
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect()
    }

    /// Every face of every simplex is present.
    pub fn is_closed(&self) -> bool {
        (1..self.simplices.len()).all(|d| {
            let lower: alloc::collections::BTreeSet<&[u32]> = self.simplices[d - 1].iter().map(Vec::as_slice).collect();
            self.simplices[d].iter().all(|s| {
                (0..s.len()).all(|drop| {
                    let face: Vec<u32> = s.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, v)| *v).collect();
                    lower.contains(face.as_slice())
                })
            })
        })
    }
}

/// Clique complex of the graph joining points at distance at most `eps`,
/// up to `max_dim`.
pub fn rips_complex<F>(n: usize, eps: f64, max_dim: usize, mut dist: F) -> Result<SimplicialComplexZ2>
where
    F: FnMut(usize, usize) -> f64,
{
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter("rips scale must be positive".into()));
    }
    if max_dim > 3 {
        return Err(Error::InvalidParameter("rips dimension is capped at 3".into()));
    }
    // upper neighbours only, ascending
    let mut up: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
    for (i, row) in up.iter_mut().enumerate() {
        row.extend((i + 1..n).filter(|&j| dist(i, j) <= eps).map(|j| j as u32));
    }
    Ok(clique_complex(&up, max_dim))
}

/// Clique complex from ascending upper-neighbour lists.
pub fn clique_complex(up: &[Vec<u32>], max_dim: usize) -> SimplicialComplexZ2 {
    let n = up.len();
    let mut simplices: Vec<Vec<Vec<u32>>> = alloc::vec![Vec::new(); max_dim + 1];
    // depth-first over cliques with ascending vertices, candidates shrinking
    // to the common upper neighbours
    fn grow(up: &[Vec<u32>], clique: &mut Vec<u32>, cands: &[u32], max_dim: usize, out: &mut [Vec<Vec<u32>>]) {
        out[clique.len() - 1].push(clique.clone());
        if clique.len() > max_dim {
            return;
        }
        for (pos, &v) in cands.iter().enumerate() {
            let next: Vec<u32> = cands[pos + 1..].iter().copied().filter(|w| up[v as usize].binary_search(w).is_ok()).collect();
            clique.push(v);
            grow(up, clique, &next, max_dim, out);
            clique.pop();
        }
    }
    for v in 0..n {
        let mut clique = alloc::vec![v as u32];
        grow(up, &mut clique, &up[v], max_dim, &mut simplices);
    }
    for s in simplices.iter_mut() {
        s.sort();
    }
    SimplicialComplexZ2 { simplices }
}

/// Rank over GF(2) of a matrix given by sorted columns of row indices.
pub fn rank_gf2(columns: &[Vec<u32>], rows: usize) -> usize {
    // column reduction keyed by the lowest (largest) row index
    let mut owner: Vec<Option<Vec<u32>>> = alloc::vec![None; rows];
    let mut rank = 0;
    for col in columns {
        let mut c = col.clone();
        while let Some(&low) = c.last() {
            match &owner[low as usize] {
                Some(o) => c = sym_diff(&c, o),
                None => break,
            }
        }
        if let Some(&low) = c.last() {
            owner[low as usize] = Some(c);
            rank += 1;
        }
    }
    rank
}

fn sym_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `beta_0 .. beta_up_to`. Needs simplices one dimension higher, otherwise
/// the top cycles would have nothing to bound them.
pub fn betti(k: &SimplicialComplexZ2, up_to: usize) -> Result<Vec<usize>> {
    if up_to + 1 >= k.simplices.len() {
        return Err(Error::InvalidParameter("complex too low-dimensional for these Betti numbers".into()));
    }
    let ranks: Vec<usize> = (0..=up_to + 1)
        .map(|d| if d == 0 || d >= k.simplices.len() { 0 } else { rank_gf2(&k.boundary(d), k.count(d - 1)) })
        .collect();
    Ok((0..=up_to).map(|d| k.count(d) - ranks[d] - ranks[d + 1]).collect())
}
