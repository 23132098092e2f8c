//! Network simplex for the bipartite transportation problem.
//!
//! The basis is a spanning tree over the m supply and n demand nodes with
//! exactly m + n − 1 basic cells (zero-flow cells kept for degeneracy).
//! Entering cells are priced by most negative reduced cost; after m + n
//! consecutive degenerate pivots pricing switches to Bland's lowest-index
//! rule until the next nondegenerate pivot. Leaving ties go to the lowest index.

use std::collections::VecDeque;

use crate::numerics::Matrix;

const MAX_PIVOTS: usize = 10_000_000;

#[derive(Debug, Clone)]
pub struct TransportSolution {
    pub plan: Matrix,
    /// Primal objective Σ cᵢⱼ xᵢⱼ.
    pub cost: f64,
    /// Row potentials.
    pub u: Vec<f64>,
    /// Column potentials.
    pub v: Vec<f64>,
    /// max(dual infeasibility, Σ xᵢⱼ |cᵢⱼ − uᵢ − vⱼ|).
    pub slackness_residual: f64,
    pub pivots: usize,
}

/// Minimizes Σ cᵢⱼ xᵢⱼ subject to row sums `supply`, column sums `demand`, x ≥ 0.
///
/// Costs may be negative. `supply` and `demand` must carry the same total mass.
pub fn solve_transport(supply: &[f64], demand: &[f64], cost: &Matrix) -> TransportSolution {
    let m = supply.len();
    let n = demand.len();
    assert!(m > 0 && n > 0, "empty transportation problem");
    assert_eq!((cost.rows(), cost.cols()), (m, n), "cost matrix shape");

    let mut flow = Matrix::zeros(m, n);
    let mut is_basic = vec![false; m * n];
    let mut basis: Vec<(usize, usize)> = Vec::with_capacity(m + n - 1);

    // northwest corner start
    {
        let mut a = supply.to_vec();
        let mut b = demand.to_vec();
        let (mut i, mut j) = (0, 0);
        loop {
            let x = a[i].min(b[j]).max(0.0);
            flow[(i, j)] = x;
            is_basic[i * n + j] = true;
            basis.push((i, j));
            a[i] -= x;
            b[j] -= x;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if i == m - 1 {
                j += 1;
            } else if j == n - 1 || a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
    }

    let scale = 1.0 + cost.max_abs();
    let eps = 1e-12 * scale;
    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    let mut pivots = 0;
    let mut degenerate_run = 0;

    loop {
        let adj = adjacency(&basis, m, n);
        potentials(&adj, cost, m, n, &mut u, &mut v);

        // Dantzig pricing; Bland's lowest-index rule after a run of degenerate pivots
        let bland = degenerate_run > m + n;
        let mut entering = None;
        let mut best = -eps;
        'scan: for i in 0..m {
            for j in 0..n {
                if is_basic[i * n + j] {
                    continue;
                }
                let r = cost[(i, j)] - u[i] - v[j];
                if r < best {
                    entering = Some((i, j));
                    if bland {
                        break 'scan;
                    }
                    best = r;
                }
            }
        }
        let Some((p, q)) = entering else { break };
        if pivots >= MAX_PIVOTS {
            break;
        }
        pivots += 1;

        // tree path from column q back to row p; signs alternate −, +, −, …
        let path = tree_path(&adj, m + q, p, m + n);
        let mut theta = f64::INFINITY;
        let mut leaving: Option<usize> = None;
        for (pos, &e) in path.iter().enumerate() {
            if pos % 2 == 0 {
                let (i, j) = basis[e];
                let x = flow[(i, j)];
                let idx = i * n + j;
                let better = match leaving {
                    None => true,
                    Some(l) => {
                        let (li, lj) = basis[l];
                        x < theta || (x == theta && idx < li * n + lj)
                    }
                };
                if better {
                    theta = x;
                    leaving = Some(e);
                }
            }
        }
        let leaving = leaving.expect("cycle has a decreasing cell");

        if theta > 0.0 {
            degenerate_run = 0;
        } else {
            degenerate_run += 1;
        }
        flow[(p, q)] += theta;
        for (pos, &e) in path.iter().enumerate() {
            let (i, j) = basis[e];
            if pos % 2 == 0 {
                flow[(i, j)] -= theta;
            } else {
                flow[(i, j)] += theta;
            }
        }
        let (li, lj) = basis[leaving];
        flow[(li, lj)] = 0.0;
        is_basic[li * n + lj] = false;
        is_basic[p * n + q] = true;
        basis[leaving] = (p, q);
    }

    let adj = adjacency(&basis, m, n);
    potentials(&adj, cost, m, n, &mut u, &mut v);

    let mut primal = 0.0;
    let mut infeasibility = 0.0f64;
    let mut slackness = 0.0;
    for i in 0..m {
        for j in 0..n {
            let x = flow[(i, j)].max(0.0);
            flow[(i, j)] = x;
            let reduced = cost[(i, j)] - u[i] - v[j];
            primal += x * cost[(i, j)];
            infeasibility = infeasibility.max(-reduced);
            slackness += x * reduced.abs();
        }
    }

    TransportSolution {
        plan: flow,
        cost: primal,
        u,
        v,
        slackness_residual: infeasibility.max(slackness).max(0.0),
        pivots,
    }
}

/// Node ids: rows 0..m, columns m..m+n. Each entry lists (neighbor, basis index).
fn adjacency(basis: &[(usize, usize)], m: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); m + n];
    for (e, &(i, j)) in basis.iter().enumerate() {
        adj[i].push((m + j, e));
        adj[m + j].push((i, e));
    }
    adj
}

fn potentials(adj: &[Vec<(usize, usize)>], cost: &Matrix, m: usize, n: usize, u: &mut [f64], v: &mut [f64]) {
    let mut seen = vec![false; m + n];
    let mut queue = VecDeque::new();
    u[0] = 0.0;
    seen[0] = true;
    queue.push_back(0);
    while let Some(node) = queue.pop_front() {
        for &(next, _) in &adj[node] {
            if seen[next] {
                continue;
            }
            seen[next] = true;
            if node < m {
                let j = next - m;
                v[j] = cost[(node, j)] - u[node];
            } else {
                let j = node - m;
                u[next] = cost[(next, j)] - v[j];
            }
            queue.push_back(next);
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "basis is not a spanning tree");
}

/// Basis indices along the tree path from `from` to `to`, in walking order.
fn tree_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize, nodes: usize) -> Vec<usize> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nodes];
    let mut seen = vec![false; nodes];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(node) = queue.pop_front() {
        if node == to {
            break;
        }
        for &(next, e) in &adj[node] {
            if !seen[next] {
                seen[next] = true;
                parent[next] = Some((node, e));
                queue.push_back(next);
            }
        }
    }
    let mut path = Vec::new();
    let mut node = to;
    while node != from {
        let (prev, e) = parent[node].expect("tree is connected");
        path.push(e);
        node = prev;
    }
    path.reverse();
    path
}
