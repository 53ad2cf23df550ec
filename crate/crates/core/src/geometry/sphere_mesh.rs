//! Cube-sphere mesh of the unit sphere: six faces of `n x n` cells, projected radially.
//!
//! Cells are indexed `face * n^2 + i * n + j`. The largest center-to-center
//! spacing is at most `2 / n`, which is what [`CubeSphere::pitch`] reports.

use crate::vec3::{direction, Vec3};

#[derive(Clone, Debug)]
pub struct CubeSphere {
    n: usize,
}

impl CubeSphere {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "cube-sphere needs at least one cell per face edge");
        Self { n }
    }

    /// Coarsest mesh whose pitch does not exceed `pitch`.
    pub fn with_pitch(pitch: f64) -> Self {
        Self::new((2.0 / pitch).ceil().max(1.0) as usize)
    }

    pub fn per_edge(&self) -> usize {
        self.n
    }

    pub fn pitch(&self) -> f64 {
        2.0 / self.n as f64
    }

    pub fn len(&self) -> usize {
        6 * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn face_axes(face: usize) -> (usize, f64, usize, usize) {
        let axis = face / 2;
        let sign = if face % 2 == 0 { 1.0 } else { -1.0 };
        (axis, sign, (axis + 1) % 3, (axis + 2) % 3)
    }

    fn coord(&self, i: isize) -> f64 {
        -1.0 + (i as f64 + 0.5) * 2.0 / self.n as f64
    }

    fn cube_point(&self, face: usize, i: isize, j: isize) -> Vec3 {
        let (a, s, u, v) = Self::face_axes(face);
        let mut p = [0.0; 3];
        p[a] = s;
        p[u] = self.coord(i);
        p[v] = self.coord(j);
        p
    }

    fn locate(&self, p: &Vec3) -> usize {
        let mut a = 0;
        for k in 1..3 {
            if p[k].abs() > p[a].abs() {
                a = k;
            }
        }
        let face = 2 * a + usize::from(p[a] < 0.0);
        let (_, _, u, v) = Self::face_axes(face);
        let n = self.n as f64;
        let cell = |c: f64| (((c + 1.0) * 0.5 * n).floor().max(0.0) as usize).min(self.n - 1);
        face * self.n * self.n + cell(p[u]) * self.n + cell(p[v])
    }

    pub fn center(&self, idx: usize) -> Vec3 {
        let nn = self.n * self.n;
        let face = idx / nn;
        let rem = idx % nn;
        direction(&self.cube_point(face, (rem / self.n) as isize, (rem % self.n) as isize))
    }

    /// The four edge-adjacent cells, folding across cube edges.
    pub fn neighbors(&self, idx: usize) -> [usize; 4] {
        let nn = self.n * self.n;
        let face = idx / nn;
        let rem = idx % nn;
        let (i, j) = ((rem / self.n) as isize, (rem % self.n) as isize);
        let steps = [(-1, 0), (1, 0), (0, -1), (0, 1)];
        let (a, s, _, _) = Self::face_axes(face);
        let mut out = [0; 4];
        for (k, (di, dj)) in steps.iter().enumerate() {
            let mut p = self.cube_point(face, i + di, j + dj);
            for c in 0..3 {
                if c != a && p[c].abs() > 1.0 {
                    let excess = p[c].abs() - 1.0;
                    p[c] = p[c].signum();
                    p[a] = s * (1.0 - excess);
                }
            }
            out[k] = self.locate(&p);
        }
        out
    }

    /// Connected components of the cells accepted by `free`, labelled in order of
    /// their lowest cell index. Returns per-cell labels (`None` for blocked cells)
    /// and the component count.
    pub fn components<F>(&self, free: F) -> (Vec<Option<u32>>, usize)
    where
        F: Fn(&Vec3) -> bool,
    {
        let total = self.len();
        let open: Vec<bool> = (0..total).map(|c| free(&self.center(c))).collect();
        let mut label: Vec<Option<u32>> = vec![None; total];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for start in 0..total {
            if !open[start] || label[start].is_some() {
                continue;
            }
            label[start] = Some(count);
            stack.push(start);
            while let Some(c) = stack.pop() {
                for nb in self.neighbors(c) {
                    if open[nb] && label[nb].is_none() {
                        label[nb] = Some(count);
                        stack.push(nb);
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }
}
