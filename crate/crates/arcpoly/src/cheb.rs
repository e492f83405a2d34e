//! Conversions between the monomial basis and the Chebyshev T/U bases.
//!
//! The monomial-to-Chebyshev direction runs a Horner-style sweep using
//! `x*T_k = (T_{k+1} + T_{|k-1|})/2` and `x*U_k = (U_{k+1} + U_{k-1})/2`
//! (all multipliers are exact halvings). The reverse direction accumulates
//! the integer coefficient rows of `T_k`/`U_k`, which are exact in `f64` up
//! to the degrees used here.

/// Monomial coefficients (ascending) -> Chebyshev T coefficients.
pub fn monomial_to_t(p: &[f64]) -> Vec<f64> {
    if p.is_empty() {
        return Vec::new();
    }
    let n = p.len();
    // r holds T coefficients of the partially evaluated Horner state
    let mut r = vec![0.0; n];
    r[0] = p[n - 1];
    let mut len = 1;
    for j in (0..n - 1).rev() {
        // r <- x*r + p[j]
        let mut next = vec![0.0; len + 1];
        for (k, &c) in r[..len].iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            next[k + 1] += 0.5 * c;
            if k == 0 {
                // x*T_0 = T_1
                next[1] += 0.5 * c;
            } else {
                next[k - 1] += 0.5 * c;
            }
        }
        next[0] += p[j];
        len += 1;
        r = next;
    }
    r
}

/// Monomial coefficients (ascending) -> Chebyshev U coefficients.
pub fn monomial_to_u(p: &[f64]) -> Vec<f64> {
    if p.is_empty() {
        return Vec::new();
    }
    let n = p.len();
    let mut r = vec![0.0; n];
    r[0] = p[n - 1];
    let mut len = 1;
    for j in (0..n - 1).rev() {
        // x*U_k = (U_{k+1} + U_{k-1})/2 with U_{-1} = 0
        let mut next = vec![0.0; len + 1];
        for (k, &c) in r[..len].iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            next[k + 1] += 0.5 * c;
            if k >= 1 {
                next[k - 1] += 0.5 * c;
            }
        }
        next[0] += p[j];
        len += 1;
        r = next;
    }
    r
}

/// Monomial rows of `T_0..T_n` (ascending coefficients, exact integers).
fn t_rows(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    rows.push(vec![1.0]);
    if n >= 1 {
        rows.push(vec![0.0, 1.0]);
    }
    for k in 2..=n {
        let mut row = vec![0.0; k + 1];
        for (j, &c) in rows[k - 1].iter().enumerate() {
            row[j + 1] += 2.0 * c;
        }
        for (j, &c) in rows[k - 2].iter().enumerate() {
            row[j] -= c;
        }
        rows.push(row);
    }
    rows
}

/// Monomial rows of `U_0..U_n`.
fn u_rows(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    rows.push(vec![1.0]);
    if n >= 1 {
        rows.push(vec![0.0, 2.0]);
    }
    for k in 2..=n {
        let mut row = vec![0.0; k + 1];
        for (j, &c) in rows[k - 1].iter().enumerate() {
            row[j + 1] += 2.0 * c;
        }
        for (j, &c) in rows[k - 2].iter().enumerate() {
            row[j] -= c;
        }
        rows.push(row);
    }
    rows
}

/// Chebyshev T coefficients -> monomial coefficients (ascending).
pub fn t_to_monomial(t: &[f64]) -> Vec<f64> {
    if t.is_empty() {
        return Vec::new();
    }
    let rows = t_rows(t.len() - 1);
    let mut p = vec![0.0; t.len()];
    for (k, &c) in t.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        for (j, &r) in rows[k].iter().enumerate() {
            p[j] += c * r;
        }
    }
    p
}

/// Chebyshev U coefficients -> monomial coefficients (ascending).
pub fn u_to_monomial(u: &[f64]) -> Vec<f64> {
    if u.is_empty() {
        return Vec::new();
    }
    let rows = u_rows(u.len() - 1);
    let mut p = vec![0.0; u.len()];
    for (k, &c) in u.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        for (j, &r) in rows[k].iter().enumerate() {
            p[j] += c * r;
        }
    }
    p
}
