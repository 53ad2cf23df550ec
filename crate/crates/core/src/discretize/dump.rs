//! Binary and text dumps of grids and matrices.
//!
//! Binary layout (little-endian): four magic bytes, a version byte, then the
//! payload. Grid (`NSGR`): dimension `u8`, spacing `f64`, half extent `i32`,
//! flags `u8` (bit 0: under-resolved), node count `u64`, nodes as `3 x i32`,
//! severed count `u64`, severed pairs as `2 x u32`. Matrix (`NSMX`): order
//! `u64`, nnz `u64`, `order + 1` row offsets `u64`, columns `u32`, values `f64`.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};

use super::grid::VoxelGrid;
use super::laplacian::SparseSymMatrix;

const GRID_MAGIC: &[u8; 4] = b"NSGR";
const MATRIX_MAGIC: &[u8; 4] = b"NSMX";
const VERSION: u8 = 1;

fn header(r: &mut impl Read, magic: &[u8; 4]) -> Result<()> {
    let mut m = [0u8; 5];
    r.read_exact(&mut m)?;
    if &m[..4] != magic {
        return Err(Error::Format(format!("bad magic, expected {}", String::from_utf8_lossy(magic))));
    }
    if m[4] != VERSION {
        return Err(Error::Format(format!("unsupported version {}", m[4])));
    }
    Ok(())
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)?;
    Ok(b)
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    Ok(u64::from_le_bytes(read_array(r)?))
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    Ok(u32::from_le_bytes(read_array(r)?))
}

fn read_i32(r: &mut impl Read) -> Result<i32> {
    Ok(i32::from_le_bytes(read_array(r)?))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_le_bytes(read_array(r)?))
}

fn read_len(r: &mut impl Read, limit: u64) -> Result<usize> {
    let n = read_u64(r)?;
    if n > limit {
        return Err(Error::Format(format!("length {n} exceeds limit {limit}")));
    }
    Ok(n as usize)
}

const MAX_LEN: u64 = 1 << 34;

pub fn write_grid(grid: &VoxelGrid, w: &mut impl Write) -> Result<()> {
    w.write_all(GRID_MAGIC)?;
    w.write_all(&[VERSION, 3])?;
    w.write_all(&grid.h().to_le_bytes())?;
    w.write_all(&grid.half_extent().to_le_bytes())?;
    w.write_all(&[u8::from(grid.under_resolved())])?;
    w.write_all(&(grid.len() as u64).to_le_bytes())?;
    for c in grid.nodes() {
        for v in c {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.write_all(&(grid.severed().len() as u64).to_le_bytes())?;
    for &(a, b) in grid.severed() {
        w.write_all(&a.to_le_bytes())?;
        w.write_all(&b.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_grid(r: &mut impl Read) -> Result<VoxelGrid> {
    header(r, GRID_MAGIC)?;
    let [dim] = read_array::<1>(r)?;
    if dim != 3 {
        return Err(Error::Format(format!("unsupported dimension {dim}")));
    }
    let h = read_f64(r)?;
    let half_extent = read_i32(r)?;
    let [flags] = read_array::<1>(r)?;
    let n = read_len(r, MAX_LEN)?;
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        nodes.push([read_i32(r)?, read_i32(r)?, read_i32(r)?]);
    }
    let s = read_len(r, MAX_LEN)?;
    let mut severed = Vec::with_capacity(s);
    for _ in 0..s {
        severed.push((read_u32(r)?, read_u32(r)?));
    }
    VoxelGrid::from_parts(h, half_extent, nodes, &severed, flags & 1 == 1)
}

pub fn write_matrix(a: &SparseSymMatrix, w: &mut impl Write) -> Result<()> {
    w.write_all(MATRIX_MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(&(a.order() as u64).to_le_bytes())?;
    w.write_all(&(a.nnz() as u64).to_le_bytes())?;
    for &o in a.row_offsets() {
        w.write_all(&(o as u64).to_le_bytes())?;
    }
    for c in a.cols() {
        w.write_all(&c.to_le_bytes())?;
    }
    for v in a.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_matrix(r: &mut impl Read) -> Result<SparseSymMatrix> {
    header(r, MATRIX_MAGIC)?;
    let order = read_len(r, MAX_LEN)?;
    let nnz = read_len(r, MAX_LEN)?;
    let mut offsets = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        offsets.push(read_u64(r)? as usize);
    }
    if offsets.first() != Some(&0) || offsets.last() != Some(&nnz) || offsets.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Format("inconsistent row offsets".into()));
    }
    let cols = (0..nnz).map(|_| read_u32(r)).collect::<Result<Vec<_>>>()?;
    if cols.iter().any(|&c| c as usize >= order) {
        return Err(Error::Format("column index out of range".into()));
    }
    let values = (0..nnz).map(|_| read_f64(r)).collect::<Result<Vec<_>>>()?;
    Ok(SparseSymMatrix::from_parts(order, offsets, cols, values))
}

/// One `row col value` line per stored entry, zero-based, after a
/// `# order nnz` comment line.
pub fn write_triplets(a: &SparseSymMatrix, w: &mut impl Write) -> Result<()> {
    writeln!(w, "# {} {}", a.order(), a.nnz())?;
    for (i, j, v) in a.triplets() {
        writeln!(w, "{i} {j} {v:?}")?;
    }
    Ok(())
}

pub fn read_triplets(r: impl BufRead) -> Result<SparseSymMatrix> {
    let mut order = None;
    let mut entries: Vec<(usize, u32, f64)> = Vec::new();
    for (ln, line) in r.lines().enumerate() {
        let line = line?;
        let bad = |m: &str| Error::Parse { line: ln + 1, message: m.to_string() };
        let t = line.trim();
        if let Some(rest) = t.strip_prefix('#') {
            if order.is_none() {
                let first = rest.split_whitespace().next().ok_or_else(|| bad("missing order"))?;
                order = Some(first.parse::<usize>().map_err(|_| bad("bad order"))?);
            }
            continue;
        }
        if t.is_empty() {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad("expected three fields"));
        }
        let i = f[0].parse::<usize>().map_err(|_| bad("bad row"))?;
        let j = f[1].parse::<u32>().map_err(|_| bad("bad column"))?;
        let v = f[2].parse::<f64>().map_err(|_| bad("bad value"))?;
        entries.push((i, j, v));
    }
    let order = order.ok_or_else(|| Error::Format("missing order header".into()))?;
    if entries.iter().any(|&(i, j, _)| i >= order || j as usize >= order) {
        return Err(Error::Format("triplet index out of range".into()));
    }
    entries.sort_by_key(|e| (e.0, e.1));
    let mut offsets = vec![0usize; order + 1];
    for &(i, _, _) in &entries {
        offsets[i + 1] += 1;
    }
    for i in 0..order {
        offsets[i + 1] += offsets[i];
    }
    let cols = entries.iter().map(|e| e.1).collect();
    let values = entries.iter().map(|e| e.2).collect();
    Ok(SparseSymMatrix::from_parts(order, offsets, cols, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{assemble_laplacian, voxelize};
    use crate::geometry::{make_fournais, SpherePointSet};

    fn sample() -> VoxelGrid {
        let f = make_fournais(SpherePointSet::poles(), 0.3, 1.8).unwrap();
        voxelize(&f.into(), 0.3).unwrap()
    }

    #[test]
    fn grid_round_trip() {
        let g = sample();
        assert!(!g.severed().is_empty());
        let mut buf = Vec::new();
        write_grid(&g, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"NSGR");
        let back = read_grid(&mut buf.as_slice()).unwrap();
        assert_eq!(back.nodes(), g.nodes());
        assert_eq!(back.severed(), g.severed());
        assert_eq!(back.h(), g.h());
        assert_eq!(back.half_extent(), g.half_extent());
        assert_eq!(back.under_resolved(), g.under_resolved());
    }

    #[test]
    fn matrix_round_trips() {
        let a = assemble_laplacian(&sample());
        let mut buf = Vec::new();
        write_matrix(&a, &mut buf).unwrap();
        assert_eq!(read_matrix(&mut buf.as_slice()).unwrap(), a);
        let mut text = Vec::new();
        write_triplets(&a, &mut text).unwrap();
        assert_eq!(read_triplets(text.as_slice()).unwrap(), a);
    }

    #[test]
    fn rejects_wrong_magic_and_version() {
        let mut buf = Vec::new();
        write_grid(&sample(), &mut buf).unwrap();
        assert!(matches!(read_matrix(&mut buf.as_slice()), Err(Error::Format(_))));
        buf[4] = 9;
        assert!(matches!(read_grid(&mut buf.as_slice()), Err(Error::Format(_))));
    }
}
