use num_traits::Zero;

use crate::rat::Rat;

/// Rank of a list of rational row vectors.
pub(crate) fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] / &pivot;
            for j in col..cols {
                let d = &factor * &m[r][j];
                m[i][j] -= d;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_vec;

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![rat_vec(&[1, 2, 3]), rat_vec(&[2, 4, 6]), rat_vec(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
        assert_eq!(rank(&[]), 0);
    }
}
