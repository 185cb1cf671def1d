//! Small dense helpers on fixed-size arrays.

/// Determinant by partial-pivot elimination.
pub fn det_n<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let mut m = *a;
    let mut det = 1.0;
    for c in 0..N {
        let p = (c..N).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap()).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..N {
            let f = m[r][c] / m[c][c];
            for k in c..N {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

pub fn det5(a: &[[f64; 5]; 5]) -> f64 {
    det_n(a)
}

/// Inverse by Gauss–Jordan with partial pivoting; None if singular.
pub fn inverse_n<const N: usize>(a: &[[f64; N]; N]) -> Option<[[f64; N]; N]> {
    let mut m = *a;
    let mut inv = [[0.0; N]; N];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for c in 0..N {
        let p = (c..N).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap()).unwrap();
        if m[p][c] == 0.0 {
            return None;
        }
        m.swap(p, c);
        inv.swap(p, c);
        let d = m[c][c];
        for k in 0..N {
            m[c][k] /= d;
            inv[c][k] /= d;
        }
        for r in 0..N {
            if r != c {
                let f = m[r][c];
                if f != 0.0 {
                    for k in 0..N {
                        m[r][k] -= f * m[c][k];
                        inv[r][k] -= f * inv[c][k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Solves A x = b.
pub fn solve_n<const N: usize>(a: &[[f64; N]; N], b: &[f64; N]) -> Option<[f64; N]> {
    let inv = inverse_n(a)?;
    Some(core::array::from_fn(|i| (0..N).map(|k| inv[i][k] * b[k]).sum()))
}

pub fn matmul<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> [[f64; N]; N] {
    core::array::from_fn(|i| core::array::from_fn(|j| (0..N).map(|k| a[i][k] * b[k][j]).sum()))
}

/// 4×4 determinant of jets by cofactor expansion along the last row,
/// used for the normal of a surface in S³ ⊂ R⁴.
pub fn cross4(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> [f64; 4] {
    core::array::from_fn(|l| {
        let mut m = [[0.0; 4]; 4];
        m[0] = *a;
        m[1] = *b;
        m[2] = *c;
        m[3][l] = 1.0;
        det_n(&m)
    })
}
