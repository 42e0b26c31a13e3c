use crate::basis::{gauss_quadrature, legendre_modes};
use crate::dg::operator::{BlockOffset, BlockOperator};
use crate::dg::space::DgSpace;
use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// 1D reference integrals of the orthonormal Legendre modes.
#[derive(Debug, Clone)]
pub(crate) struct ReferenceData {
    pub n: usize,
    /// `stiff[a * n + b] = int_{-1}^{1} phi_b phi_a' d xi`
    pub stiff: Vec<f64>,
    /// `phi_a(1)`
    pub right: Vec<f64>,
    /// `phi_a(-1)`
    pub left: Vec<f64>,
}

impl ReferenceData {
    pub fn new(k: usize) -> Self {
        let n = k + 1;
        let q = gauss_quadrature(k + 2).expect("k + 2 >= 1");
        let mut stiff = vec![0.0; n * n];
        for (x, w) in q.iter() {
            let (v, d) = legendre_modes(k, x).expect("Gauss nodes lie in [-1, 1]");
            for a in 0..n {
                for b in 0..n {
                    stiff[a * n + b] += w * v[b] * d[a];
                }
            }
        }
        let (right, _) = legendre_modes(k, 1.0).unwrap();
        let (left, _) = legendre_modes(k, -1.0).unwrap();
        Self {
            n,
            stiff,
            right,
            left,
        }
    }

    /// Diagonal block of `h L_h / beta` on a 1D cell: `2 (S - r r^T)`.
    pub fn diagonal_1d(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                out[a * n + b] = 2.0 * (self.stiff[a * n + b] - self.right[a] * self.right[b]);
            }
        }
        out
    }

    /// Upwind neighbour block of `h L_h / beta` on a uniform 1D mesh: `2 l r^T`.
    pub fn neighbor_1d(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                out[a * n + b] = 2.0 * self.left[a] * self.right[b];
            }
        }
        out
    }
}

/// Upwind DG operator `L_h` of `-beta . grad` on `V_h^k`.
pub fn assemble_upwind(space: &DgSpace) -> BlockOperator {
    assemble_upwind_with_test_degree(space, space.degree())
}

/// `L_h` tested only against modes of total degree `<= test_degree`; the
/// remaining rows are zero. With `test_degree = k - 1` this is the reduced
/// operator assembled directly on the smaller test space.
pub fn assemble_upwind_with_test_degree(space: &DgSpace, test_degree: usize) -> BlockOperator {
    let k = space.degree();
    let rd = ReferenceData::new(k);
    let basis = space.basis();
    let nm = basis.n_modes();
    let tested: Vec<bool> = (0..nm).map(|m| basis.mode_degree(m) <= test_degree).collect();
    let mask = |mut blk: Vec<f64>| {
        for (r, &t) in tested.iter().enumerate() {
            if !t {
                blk[r * nm..(r + 1) * nm].iter_mut().for_each(|v| *v = 0.0);
            }
        }
        blk
    };

    match space.mesh() {
        Mesh::OneD(mesh) => {
            let n = mesh.n_cells();
            let beta = mesh.beta();
            let h = mesh.cell_sizes();
            let diag_ref = rd.diagonal_1d();
            let nb_ref = rd.neighbor_1d();
            let offsets = vec![BlockOffset::Diagonal, BlockOffset::Left];
            let neighbors: Vec<usize> = (0..n).flat_map(|c| [c, (c + n - 1) % n]).collect();
            if mesh.is_uniform() {
                let s = beta * n as f64;
                let mut blocks = mask(diag_ref.iter().map(|v| s * v).collect());
                blocks.extend(mask(nb_ref.iter().map(|v| s * v).collect()));
                let ids = (0..n).flat_map(|_| [0, 1]).collect();
                BlockOperator::new(n, nm, offsets, neighbors, ids, blocks)
            } else {
                let mut blocks = Vec::with_capacity(2 * n * nm * nm);
                for c in 0..n {
                    let hl = h[(c + n - 1) % n];
                    let sd = beta / h[c];
                    let sn = beta / (h[c] * hl).sqrt();
                    blocks.extend(mask(diag_ref.iter().map(|v| sd * v).collect()));
                    blocks.extend(mask(nb_ref.iter().map(|v| sn * v).collect()));
                }
                let ids = (0..2 * n).collect();
                BlockOperator::new(n, nm, offsets, neighbors, ids, blocks)
            }
        }
        Mesh::TwoD(mesh) => {
            let (bx, by) = (mesh.beta_x(), mesh.beta_y());
            let (sx, sy) = (2.0 * bx / mesh.hx(), 2.0 * by / mesh.hy());
            let modes = basis.modes();
            let r1 = rd.n;
            let mut diag = vec![0.0; nm * nm];
            let mut left = vec![0.0; nm * nm];
            let mut below = vec![0.0; nm * nm];
            for (m, &(a1, a2)) in modes.iter().enumerate() {
                for (p, &(b1, b2)) in modes.iter().enumerate() {
                    let i = m * nm + p;
                    if a2 == b2 {
                        diag[i] += sx * (rd.stiff[a1 * r1 + b1] - rd.right[a1] * rd.right[b1]);
                        left[i] = sx * rd.left[a1] * rd.right[b1];
                    }
                    if a1 == b1 {
                        diag[i] += sy * (rd.stiff[a2 * r1 + b2] - rd.right[a2] * rd.right[b2]);
                        below[i] = sy * rd.left[a2] * rd.right[b2];
                    }
                }
            }
            let n = mesh.n_cells();
            let offsets = vec![BlockOffset::Diagonal, BlockOffset::Left, BlockOffset::Below];
            let neighbors = (0..n)
                .flat_map(|c| {
                    let (l, b) = mesh.upwind_neighbors(c);
                    [c, l, b]
                })
                .collect();
            let mut blocks = mask(diag);
            blocks.extend(mask(left));
            blocks.extend(mask(below));
            let ids = (0..n).flat_map(|_| [0, 1, 2]).collect();
            BlockOperator::new(n, nm, offsets, neighbors, ids, blocks)
        }
    }
}

/// Reduced operator `(I - Pi_perp) L_h`: rows of the top-degree modes zeroed.
pub fn reduce(l: &BlockOperator, space: &DgSpace) -> Result<BlockOperator> {
    if space.degree() == 0 {
        return Err(Error::UnsupportedDegree(
            0,
            "the reduced test space V_h^{k-1} is empty for k = 0",
        ));
    }
    if l.block_size() != space.n_modes() {
        return Err(Error::Incompatible(
            "operator block size does not match the space".into(),
        ));
    }
    let top: Vec<usize> = space.basis().top_modes().collect();
    Ok(l.zero_rows(&top))
}
