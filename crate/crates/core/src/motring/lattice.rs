//! Small integer lattice routines: kernels, Hermite normal form, coordinates.

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A basis of `{y ∈ ℤⁿ : A y = 0}` for the `m × n` matrix `A` (given by rows).
pub(crate) fn integer_kernel(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    // columns of u track the unimodular column operations applied to a
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut pivot = 0;
    for r in 0..a.len() {
        if pivot == n {
            break;
        }
        for c in pivot + 1..n {
            let (x, y) = (a[r][pivot], a[r][c]);
            if y == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(x, y);
            let (p, q) = (x / g, y / g);
            // [col_pivot, col_c] <- [s*col_pivot + t*col_c, -q*col_pivot + p*col_c]
            for m in [&mut a, &mut u] {
                for row in m.iter_mut() {
                    let (cp, cc) = (row[pivot], row[c]);
                    row[pivot] = s * cp + t * cc;
                    row[c] = -q * cp + p * cc;
                }
            }
        }
        if a[r][pivot] != 0 {
            pivot += 1;
        }
    }
    (pivot..n).map(|c| u.iter().map(|row| row[c]).collect()).collect()
}

/// Row Hermite normal form of the lattice spanned by `rows`, zero rows dropped.
pub(crate) fn hermite(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let mut out_rows = 0;
    for c in 0..n {
        let mut i = out_rows + 1;
        while i < a.len() {
            if a[i][c] != 0 {
                let (x, y) = (a[out_rows][c], a[i][c]);
                let (g, s, t) = ext_gcd(x, y);
                let (p, q) = (x / g, y / g);
                let (ra, rb) = (a[out_rows].clone(), a[i].clone());
                a[out_rows] = ra.iter().zip(&rb).map(|(u, v)| s * u + t * v).collect();
                a[i] = ra.iter().zip(&rb).map(|(u, v)| -q * u + p * v).collect();
            }
            i += 1;
        }
        if out_rows < a.len() && a[out_rows][c] != 0 {
            if a[out_rows][c] < 0 {
                a[out_rows].iter_mut().for_each(|v| *v = -*v);
            }
            let piv = a[out_rows][c];
            for k in 0..out_rows {
                let f = a[k][c].div_euclid(piv);
                let pr = a[out_rows].clone();
                a[k].iter_mut().zip(&pr).for_each(|(v, p)| *v -= f * p);
            }
            out_rows += 1;
        }
    }
    a.truncate(out_rows);
    a
}

/// Coordinates of `x` in a Hermite basis, if `x` lies in its span over ℤ.
pub(crate) fn coordinates(basis: &[Vec<i128>], x: &[i128]) -> Option<Vec<i128>> {
    let mut rest = x.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let p = b.iter().position(|v| *v != 0)?;
        if rest[p] % b[p] != 0 {
            return None;
        }
        let c = rest[p] / b[p];
        rest.iter_mut().zip(b).for_each(|(r, v)| *r -= c * v);
        coords.push(c);
    }
    rest.iter().all(|v| *v == 0).then_some(coords)
}

/// Hermite basis of the saturation `(ℚ·L) ∩ ℤⁿ` of the lattice spanned by `rows`.
pub(crate) fn saturation(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let kernel = integer_kernel(rows, n);
    if kernel.is_empty() {
        return hermite(&(0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect::<Vec<_>>(), n);
    }
    hermite(&integer_kernel(&kernel, n), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[i128], b: &[i128]) -> i128 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn kernel_and_saturation() {
        let a = vec![vec![2, 4, 6], vec![1, 1, 1]];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(a.iter().all(|r| dot(r, &k[0]) == 0));
        assert_eq!(saturation(&[vec![2, 2]], 2), vec![vec![1, 1]]);
        assert_eq!(saturation(&[vec![2, 0], vec![0, 3]], 2), vec![vec![1, 0], vec![0, 1]]);
        let h = hermite(&[vec![3, 1], vec![1, 1]], 2);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(coordinates(&h, &[5, 3]), Some(vec![5, -1]));
        assert_eq!(coordinates(&h, &[0, 1]), None);
        assert!(integer_kernel(&[], 2).len() == 2);
    }
}
