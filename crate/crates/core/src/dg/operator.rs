use std::io::{self, Write};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default cap on the number of unknowns for dense export.
pub const DENSE_CAP: usize = 4096;

/// Cells per parallel work unit when applying block operators.
const PAR_CHUNK_CELLS: usize = 256;

/// A real linear map on `R^n`, applied matrix-free.
pub trait LinearMap: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// `y = A^T x`
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]);

    /// Dense matrix built column by column from `apply`.
    fn to_dense(&self, cap: usize) -> Result<DMatrix<f64>> {
        let n = self.dim();
        if n > cap {
            return Err(Error::TooLarge { size: n, cap });
        }
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            m.column_mut(j).copy_from_slice(&col);
            e[j] = 0.0;
        }
        Ok(m)
    }
}

/// The identity on `R^n`.
#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl LinearMap for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
}

/// Position of a coupled block relative to the row cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockOffset {
    Diagonal,
    /// upwind neighbour in x
    Left,
    /// upwind neighbour in y
    Below,
}

/// Periodic block-sparse operator: each row cell couples to itself and to a
/// fixed set of upwind neighbours. Blocks are row-major and stored once per
/// distinct value, so uniform meshes keep a single block per offset.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    n_cells: usize,
    block: usize,
    offsets: Vec<BlockOffset>,
    /// `neighbors[c * n_offsets + o]`: column cell of block `o` in row `c`
    neighbors: Vec<usize>,
    /// `block_ids[c * n_offsets + o]`: index into `blocks`
    block_ids: Vec<usize>,
    blocks: Vec<f64>,
    /// transpose structure: for column cell `c`, entries `(row cell, block id)`
    rev_start: Vec<usize>,
    rev: Vec<(usize, usize)>,
}

impl BlockOperator {
    pub(crate) fn new(
        n_cells: usize,
        block: usize,
        offsets: Vec<BlockOffset>,
        neighbors: Vec<usize>,
        block_ids: Vec<usize>,
        blocks: Vec<f64>,
    ) -> Self {
        let no = offsets.len();
        assert_eq!(neighbors.len(), n_cells * no);
        assert_eq!(block_ids.len(), n_cells * no);
        assert_eq!(blocks.len() % (block * block), 0);
        let mut counts = vec![0usize; n_cells + 1];
        for &col in &neighbors {
            counts[col + 1] += 1;
        }
        for c in 0..n_cells {
            counts[c + 1] += counts[c];
        }
        let rev_start = counts.clone();
        let mut fill = counts;
        let mut rev = vec![(0, 0); neighbors.len()];
        for row in 0..n_cells {
            for o in 0..no {
                let col = neighbors[row * no + o];
                rev[fill[col]] = (row, block_ids[row * no + o]);
                fill[col] += 1;
            }
        }
        Self {
            n_cells,
            block,
            offsets,
            neighbors,
            block_ids,
            blocks,
            rev_start,
            rev,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    pub fn offsets(&self) -> &[BlockOffset] {
        &self.offsets
    }

    /// Number of distinct stored blocks.
    pub fn n_stored_blocks(&self) -> usize {
        self.blocks.len() / (self.block * self.block)
    }

    /// Column cell of block `offset` in row `cell`.
    pub fn neighbor(&self, cell: usize, offset: usize) -> usize {
        self.neighbors[cell * self.offsets.len() + offset]
    }

    /// Row-major block `offset` of row `cell`.
    pub fn block(&self, cell: usize, offset: usize) -> &[f64] {
        let id = self.block_ids[cell * self.offsets.len() + offset];
        self.stored(id)
    }

    fn stored(&self, id: usize) -> &[f64] {
        let bb = self.block * self.block;
        &self.blocks[id * bb..(id + 1) * bb]
    }

    /// Copy with the given rows (local mode indices) zeroed in every block.
    pub fn zero_rows(&self, rows: &[usize]) -> BlockOperator {
        let mut out = self.clone();
        let b = self.block;
        for blk in out.blocks.chunks_mut(b * b) {
            for &r in rows {
                blk[r * b..(r + 1) * b].iter_mut().for_each(|v| *v = 0.0);
            }
        }
        out
    }

    fn apply_rows(&self, first_cell: usize, x: &[f64], y: &mut [f64]) {
        let b = self.block;
        let no = self.offsets.len();
        for (local, yc) in y.chunks_mut(b).enumerate() {
            let c = first_cell + local;
            yc.iter_mut().for_each(|v| *v = 0.0);
            for o in 0..no {
                let col = self.neighbors[c * no + o];
                let blk = self.stored(self.block_ids[c * no + o]);
                let xc = &x[col * b..(col + 1) * b];
                for (r, yr) in yc.iter_mut().enumerate() {
                    let row = &blk[r * b..(r + 1) * b];
                    *yr += row.iter().zip(xc).map(|(a, v)| a * v).sum::<f64>();
                }
            }
        }
    }

    fn apply_transpose_rows(&self, first_cell: usize, x: &[f64], y: &mut [f64]) {
        let b = self.block;
        for (local, yc) in y.chunks_mut(b).enumerate() {
            let c = first_cell + local;
            yc.iter_mut().for_each(|v| *v = 0.0);
            for &(row, id) in &self.rev[self.rev_start[c]..self.rev_start[c + 1]] {
                let blk = self.stored(id);
                let xr = &x[row * b..(row + 1) * b];
                for (r, &xv) in xr.iter().enumerate() {
                    let brow = &blk[r * b..(r + 1) * b];
                    for (yv, a) in yc.iter_mut().zip(brow) {
                        *yv += a * xv;
                    }
                }
            }
        }
    }

    /// Write the dense matrix in column-major plain text: a `rows cols`
    /// line, then one value per line.
    pub fn write_dense_text<W: Write>(&self, out: &mut W, cap: usize) -> Result<()> {
        let m = self.to_dense(cap)?;
        write_text(&m, out).map_err(io_err)
    }

    /// Write the dense matrix as binary: 8-byte magic `RKDGMAT\0`, rows and
    /// cols as little-endian `u32`, then column-major little-endian `f64`.
    pub fn write_dense_binary<W: Write>(&self, out: &mut W, cap: usize) -> Result<()> {
        let m = self.to_dense(cap)?;
        write_binary(&m, out).map_err(io_err)
    }
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidArgument(format!("i/o failure: {e}"))
}

pub const DENSE_MAGIC: &[u8; 8] = b"RKDGMAT\0";

pub fn write_text<W: Write>(m: &DMatrix<f64>, out: &mut W) -> io::Result<()> {
    writeln!(out, "{} {}", m.nrows(), m.ncols())?;
    for v in m.iter() {
        writeln!(out, "{v:.17e}")?;
    }
    Ok(())
}

pub fn write_binary<W: Write>(m: &DMatrix<f64>, out: &mut W) -> io::Result<()> {
    out.write_all(DENSE_MAGIC)?;
    out.write_all(&(m.nrows() as u32).to_le_bytes())?;
    out.write_all(&(m.ncols() as u32).to_le_bytes())?;
    for v in m.iter() {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Inverse of [`write_binary`].
pub fn read_binary(bytes: &[u8]) -> Result<DMatrix<f64>> {
    let bad = || Error::InvalidArgument("malformed dense matrix dump".into());
    if bytes.len() < 16 || &bytes[..8] != DENSE_MAGIC {
        return Err(bad());
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let body = &bytes[16..];
    if body.len() != rows * cols * 8 {
        return Err(bad());
    }
    let vals = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    Ok(DMatrix::from_iterator(rows, cols, vals))
}

impl LinearMap for BlockOperator {
    fn dim(&self) -> usize {
        self.n_cells * self.block
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let b = self.block;
        if self.n_cells >= 2 * PAR_CHUNK_CELLS {
            y.par_chunks_mut(PAR_CHUNK_CELLS * b)
                .enumerate()
                .for_each(|(i, yc)| self.apply_rows(i * PAR_CHUNK_CELLS, x, yc));
        } else {
            self.apply_rows(0, x, y);
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        let b = self.block;
        if self.n_cells >= 2 * PAR_CHUNK_CELLS {
            y.par_chunks_mut(PAR_CHUNK_CELLS * b)
                .enumerate()
                .for_each(|(i, yc)| self.apply_transpose_rows(i * PAR_CHUNK_CELLS, x, yc));
        } else {
            self.apply_transpose_rows(0, x, y);
        }
    }

    fn to_dense(&self, cap: usize) -> Result<DMatrix<f64>> {
        let n = self.dim();
        if n > cap {
            return Err(Error::TooLarge { size: n, cap });
        }
        let b = self.block;
        let mut m = DMatrix::zeros(n, n);
        for c in 0..self.n_cells {
            for o in 0..self.offsets.len() {
                let col = self.neighbor(c, o);
                let blk = self.block(c, o);
                for r in 0..b {
                    for s in 0..b {
                        m[(c * b + r, col * b + s)] += blk[r * b + s];
                    }
                }
            }
        }
        Ok(m)
    }
}
