//! Shared inputs for the benchmarks.

use dsym_core::catalog::{self, BranchView};

/// Every catalog branch, in listing order.
pub fn branches() -> Vec<BranchView> {
    catalog::list()
        .iter()
        .map(|row| catalog::get(&row.id, &row.branch).expect("listed branch"))
        .collect()
}

/// A dense rational function in `n, u(0), u(1)` of the given degree.
pub fn dense_text(degree: u32) -> String {
    let mut terms = Vec::new();
    for i in 0..=degree {
        for j in 0..=degree - i {
            terms.push(format!(
                "{}*n^{i}*u(0)^{j}*u(1)^{}",
                i + j + 1,
                degree - i - j
            ));
        }
    }
    format!("({})/(u(0)+u(1)+n+1)", terms.join("+"))
}
