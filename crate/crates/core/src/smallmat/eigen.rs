//! Eigenvalues of small real matrices: balancing, reduction to upper
//! Hessenberg form by stabilized elementary similarity transforms, then
//! Francis double-shift QR.

use alloc::vec::Vec;

use super::Mat;
use crate::{Complex64, Error, Result};

/// Largest matrix accepted by [`eigenvalues`].
pub const MAX_EIG_DIM: usize = 6;

/// All eigenvalues of a real square matrix with at most 6 rows.
///
/// The order is that in which the QR iteration deflates them; complex
/// eigenvalues come in adjacent conjugate pairs. Fails with
/// [`Error::EigenFailure`] after `100·n` QR sweeps.
pub fn eigenvalues(a: &Mat) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::Dimension("eigenvalues need a square matrix"));
    }
    let n = a.rows();
    if n > MAX_EIG_DIM {
        return Err(Error::Dimension("eigenvalues limited to n <= 6"));
    }
    let mut h: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
    balance(&mut h);
    to_hessenberg(&mut h);
    hqr(&mut h, 100 * n)
}

fn balance(a: &mut [Vec<f64>]) {
    const RADIX: f64 = 2.0;
    let n = a.len();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= g;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

fn to_hessenberg(a: &mut [Vec<f64>]) {
    let n = a.len();
    for m in 1..n.saturating_sub(1) {
        let mut x: f64 = 0.0;
        let mut i = m;
        for j in m..n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..n {
                let t = a[i][j];
                a[i][j] = a[m][j];
                a[m][j] = t;
            }
            for row in a.iter_mut() {
                row.swap(i, m);
            }
        }
        if x != 0.0 {
            for i in (m + 1)..n {
                let mut y = a[i][m - 1];
                if y != 0.0 {
                    y /= x;
                    a[i][m - 1] = y;
                    for j in m..n {
                        a[i][j] -= y * a[m][j];
                    }
                    for row in a.iter_mut() {
                        row[m] += y * row[i];
                    }
                }
            }
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        for v in row.iter_mut().take(i.saturating_sub(1)) {
            *v = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
fn hqr(a: &mut [Vec<f64>], max_sweeps: usize) -> Result<Vec<Complex64>> {
    let n = a.len();
    let mut wr = alloc::vec![0.0; n];
    let mut wi = alloc::vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    let mut sweeps = 0usize;
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            // look for a single small subdiagonal element
            let mut l = nu;
            while l > 0 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= f64::EPSILON * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
            } else {
                let mut y = a[nu - 1][nu - 1];
                let mut w = a[nu][nu - 1] * a[nu - 1][nu];
                if l == nu - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = libm::sqrt(q.abs());
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nu - 1] = x + z;
                        wr[nu] = x + z;
                        if z != 0.0 {
                            wr[nu] = x - w / z;
                        }
                        wi[nu - 1] = 0.0;
                        wi[nu] = 0.0;
                    } else {
                        wr[nu - 1] = x + p;
                        wr[nu] = x + p;
                        wi[nu - 1] = z;
                        wi[nu] = -z;
                    }
                    nn -= 2;
                } else {
                    sweeps += 1;
                    if sweeps > max_sweeps {
                        return Err(Error::EigenFailure);
                    }
                    if its > 0 && its % 10 == 0 {
                        // exceptional shift
                        t += x;
                        for (i, row) in a.iter_mut().enumerate().take(nu + 1) {
                            row[i] -= x;
                        }
                        let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    qr_sweep(a, l, nu, x, y, w);
                }
            }
            if nn < 0 || (l as isize) + 1 >= nn {
                break;
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex64::new(re, im)).collect())
}

fn qr_sweep(a: &mut [Vec<f64>], l: usize, nn: usize, shift_x: f64, shift_y: f64, shift_w: f64) {
    let (mut p, mut q, mut r);
    let mut z;
    // form shift and look for two consecutive small subdiagonal elements
    let mut m = nn - 2;
    loop {
        z = a[m][m];
        let rr = shift_x - z;
        let s = shift_y - z;
        p = (rr * s - shift_w) / a[m + 1][m] + a[m][m + 1];
        q = a[m + 1][m + 1] - z - rr - s;
        r = a[m + 2][m + 1];
        let s = p.abs() + q.abs() + r.abs();
        p /= s;
        q /= s;
        r /= s;
        if m == l {
            break;
        }
        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
        if u <= f64::EPSILON * v {
            break;
        }
        m -= 1;
    }
    for i in m..nn - 1 {
        a[i + 2][i] = 0.0;
        if i != m {
            a[i + 2][i - 1] = 0.0;
        }
    }
    let mut x = 0.0;
    for k in m..nn {
        if k != m {
            p = a[k][k - 1];
            q = a[k + 1][k - 1];
            r = if k + 1 != nn { a[k + 2][k - 1] } else { 0.0 };
            x = p.abs() + q.abs() + r.abs();
            if x != 0.0 {
                p /= x;
                q /= x;
                r /= x;
            }
        }
        let s = sign(libm::sqrt(p * p + q * q + r * r), p);
        if s == 0.0 {
            continue;
        }
        if k == m {
            if l != m {
                a[k][k - 1] = -a[k][k - 1];
            }
        } else {
            a[k][k - 1] = -s * x;
        }
        p += s;
        let xx = p / s;
        let yy = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for j in k..=nn {
            let mut pp = a[k][j] + q * a[k + 1][j];
            if k + 1 != nn {
                pp += r * a[k + 2][j];
                a[k + 2][j] -= pp * z;
            }
            a[k + 1][j] -= pp * yy;
            a[k][j] -= pp * xx;
        }
        let mmin = if nn < k + 3 { nn } else { k + 3 };
        for row in a.iter_mut().take(mmin + 1).skip(l) {
            let mut pp = xx * row[k] + yy * row[k + 1];
            if k + 1 != nn {
                pp += z * row[k + 2];
                row[k + 2] -= pp * r;
            }
            row[k + 1] -= pp * q;
            row[k] -= pp;
        }
    }
}
