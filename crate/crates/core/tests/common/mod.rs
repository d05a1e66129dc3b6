#![allow(dead_code)]

use gorenstein_core::Multigraph;

/// Determinant of an integer matrix by fraction-free elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r][k] != 0) else { return 0 };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Spanning-tree count from the Laplacian with the last row and column removed.
pub fn matrix_tree_count(g: &Multigraph) -> i128 {
    let n = g.vertex_count();
    let mut lap = vec![vec![0i128; n]; n];
    for e in g.edges() {
        lap[e.u][e.u] += 1;
        lap[e.v][e.v] += 1;
        lap[e.u][e.v] -= 1;
        lap[e.v][e.u] -= 1;
    }
    let minor: Vec<Vec<i128>> = lap.iter().take(n.saturating_sub(1)).map(|r| r[..n - 1].to_vec()).collect();
    bareiss_determinant(minor)
}

pub fn c4_with_chord() -> Multigraph {
    Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap()
}

pub fn diamond() -> Multigraph {
    Multigraph::from_pairs(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}
