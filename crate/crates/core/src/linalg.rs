//! Small fixed-size tensor helpers for chart dimension 4.

use core::array::from_fn;

use crate::jet::{Jet3, JetError};
use crate::math;

pub const DIM: usize = 4;

pub type Vec4 = [f64; DIM];
pub type Mat4 = [[f64; DIM]; DIM];
pub type Rank3 = [[[f64; DIM]; DIM]; DIM];
pub type Rank4 = [[[[f64; DIM]; DIM]; DIM]; DIM];

pub type JetVec4 = [Jet3; DIM];
pub type JetMat4 = [[Jet3; DIM]; DIM];
pub type JetRank3 = [[[Jet3; DIM]; DIM]; DIM];
pub type JetRank4 = [[[[Jet3; DIM]; DIM]; DIM]; DIM];

pub fn vec4(f: impl FnMut(usize) -> f64) -> Vec4 {
    from_fn(f)
}

pub fn mat4(mut f: impl FnMut(usize, usize) -> f64) -> Mat4 {
    from_fn(|i| from_fn(|j| f(i, j)))
}

pub fn rank3(mut f: impl FnMut(usize, usize, usize) -> f64) -> Rank3 {
    from_fn(|i| from_fn(|j| from_fn(|k| f(i, j, k))))
}

pub fn rank4(mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Rank4 {
    from_fn(|i| from_fn(|j| from_fn(|k| from_fn(|l| f(i, j, k, l)))))
}

pub fn jet_vec4(f: impl FnMut(usize) -> Jet3) -> JetVec4 {
    from_fn(f)
}

pub fn jet_mat4(mut f: impl FnMut(usize, usize) -> Jet3) -> JetMat4 {
    from_fn(|i| from_fn(|j| f(i, j)))
}

pub fn jet_rank3(mut f: impl FnMut(usize, usize, usize) -> Jet3) -> JetRank3 {
    from_fn(|i| from_fn(|j| from_fn(|k| f(i, j, k))))
}

pub fn jet_rank4(mut f: impl FnMut(usize, usize, usize, usize) -> Jet3) -> JetRank4 {
    from_fn(|i| from_fn(|j| from_fn(|k| from_fn(|l| f(i, j, k, l)))))
}

pub fn sum1(mut f: impl FnMut(usize) -> f64) -> f64 {
    f(0) + f(1) + f(2) + f(3)
}

pub fn sum2(mut f: impl FnMut(usize, usize) -> f64) -> f64 {
    sum1(|i| sum1(|j| f(i, j)))
}

pub fn jet_sum1(mut f: impl FnMut(usize) -> Jet3) -> Jet3 {
    f(0) + f(1) + f(2) + f(3)
}

pub fn jet_sum2(mut f: impl FnMut(usize, usize) -> Jet3) -> Jet3 {
    jet_sum1(|i| jet_sum1(|j| f(i, j)))
}

pub fn norm_vec4(v: &Vec4) -> f64 {
    math::norm(v)
}

pub fn norm_mat4(m: &Mat4) -> f64 {
    math::hypot_n(m.iter().flatten().copied())
}

pub fn norm_rank3(t: &Rank3) -> f64 {
    math::hypot_n(t.iter().flatten().flatten().copied())
}

pub fn norm_rank4(t: &Rank4) -> f64 {
    math::hypot_n(t.iter().flatten().flatten().flatten().copied())
}

/// Determinant by cofactor expansion along the first row.
pub fn det4(m: &Mat4) -> f64 {
    fn det3(a: [[f64; 3]; 3]) -> f64 {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }
    let mut det = 0.0;
    for col in 0..DIM {
        let minor: [[f64; 3]; 3] = from_fn(|r| {
            let mut c = 0;
            from_fn(|_| {
                if c == col {
                    c += 1;
                }
                let v = m[r + 1][c];
                c += 1;
                v
            })
        });
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][col] * det3(minor);
    }
    det
}

/// Gauss-Jordan inverse with partial pivoting; `None` when singular.
pub fn invert4(m: &Mat4) -> Option<Mat4> {
    let mut a = *m;
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(1e-250);
    let mut inv = mat4(|i, j| if i == j { 1.0 } else { 0.0 });
    for col in 0..DIM {
        let pivot_row = (col..DIM)
            .max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap())?;
        if a[pivot_row][col].abs() < 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let p = a[col][col];
        for j in 0..DIM {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..DIM {
            if r == col {
                continue;
            }
            let factor = a[r][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..DIM {
                a[r][j] -= factor * a[col][j];
                inv[r][j] -= factor * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// Eigenvalues of a symmetric 4x4 matrix by cyclic Jacobi rotations,
/// ascending order.
pub fn sym_eigenvalues4(m: &Mat4) -> Vec4 {
    let mut a = *m;
    for _ in 0..32 {
        let mut off = 0.0;
        for p in 0..DIM {
            for q in (p + 1)..DIM {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-300 {
            break;
        }
        for p in 0..DIM {
            for q in (p + 1)..DIM {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..DIM {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..DIM {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig = vec4(|i| a[i][i]);
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Solve `g . X = I` in jet arithmetic (Gaussian elimination, partial
/// pivoting on the value parts), giving the inverse metric with all its
/// derivatives. Fails when the value-part matrix is numerically singular.
pub fn invert_jet4(g: &JetMat4) -> Result<JetMat4, JetError> {
    let mut a = *g;
    let mut inv = jet_mat4(|i, j| Jet3::constant(if i == j { 1.0 } else { 0.0 }));
    for col in 0..DIM {
        let pivot_row = (col..DIM)
            .max_by(|&r, &s| {
                a[r][col]
                    .value()
                    .abs()
                    .partial_cmp(&a[s][col].value().abs())
                    .unwrap()
            })
            .expect("non-empty range");
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let p = a[col][col].recip()?;
        for j in 0..DIM {
            a[col][j] = a[col][j] * p;
            inv[col][j] = inv[col][j] * p;
        }
        for r in 0..DIM {
            if r == col {
                continue;
            }
            let factor = a[r][col];
            if factor.max_abs_coeff() == 0.0 {
                continue;
            }
            for j in 0..DIM {
                a[r][j] = a[r][j] - factor * a[col][j];
                inv[r][j] = inv[r][j] - factor * inv[col][j];
            }
        }
    }
    Ok(inv)
}
