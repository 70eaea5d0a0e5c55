use std::fmt;

/// Maximum number of vertices a [`Simplex`] can hold (dimension 5).
pub const MAX_VERTICES: usize = 6;

/// A simplex given by a strictly increasing list of point indices.
///
/// Stored inline so simplices are `Copy` and cheap to hash.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    len: u8,
    verts: [u32; MAX_VERTICES],
}

impl Simplex {
    /// Builds a simplex from arbitrary vertex indices, sorting them.
    ///
    /// Panics on duplicates, an empty list, or more than [`MAX_VERTICES`] vertices.
    pub fn new(vertices: &[u32]) -> Self {
        assert!(
            !vertices.is_empty() && vertices.len() <= MAX_VERTICES,
            "simplex must have 1..={MAX_VERTICES} vertices"
        );
        let mut verts = [u32::MAX; MAX_VERTICES];
        verts[..vertices.len()].copy_from_slice(vertices);
        verts[..vertices.len()].sort_unstable();
        for w in verts[..vertices.len()].windows(2) {
            assert!(w[0] < w[1], "duplicate vertex {} in simplex", w[0]);
        }
        Simplex {
            len: vertices.len() as u8,
            verts,
        }
    }

    pub fn vertex(v: u32) -> Self {
        Simplex::new(&[v])
    }

    pub fn vertices(&self) -> &[u32] {
        &self.verts[..self.len as usize]
    }

    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.len as usize
    }

    /// Codimension-one faces; the `i`-th face omits vertex `i`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.len as usize;
        (0..if n > 1 { n } else { 0 }).map(move |skip| {
            let mut verts = [u32::MAX; MAX_VERTICES];
            let mut j = 0;
            for (i, &v) in self.vertices().iter().enumerate() {
                if i != skip {
                    verts[j] = v;
                    j += 1;
                }
            }
            Simplex {
                len: (n - 1) as u8,
                verts,
            }
        })
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.len as usize;
        let mut out = Vec::with_capacity((1 << n) - 1);
        for mask in 1u32..(1 << n) {
            let sub: Vec<u32> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.verts[i])
                .collect();
            out.push(Simplex::new(&sub));
        }
        out
    }

    pub fn contains(&self, other: &Simplex) -> bool {
        other.vertices().iter().all(|v| self.vertices().contains(v))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.vertices())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices().iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_faces() {
        let s = Simplex::new(&[3, 1, 2]);
        assert_eq!(s.vertices(), &[1, 2, 3]);
        assert_eq!(s.dim(), 2);
        let facets: Vec<_> = s.facets().collect();
        assert_eq!(facets.len(), 3);
        assert_eq!(facets[0].vertices(), &[2, 3]);
        assert_eq!(s.faces().len(), 7);
        assert!(s.contains(&Simplex::new(&[1, 3])));
        assert_eq!(Simplex::vertex(4).facets().count(), 0);
    }

    #[test]
    #[should_panic]
    fn rejects_duplicates() {
        Simplex::new(&[1, 1]);
    }
}
