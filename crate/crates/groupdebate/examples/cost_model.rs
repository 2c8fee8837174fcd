//! The analytical cost model, no backend involved.
//!
//! Walks through what the closed forms predict: per-round cost rows, the
//! closed-form/recurrence agreement, the upper bounds, how the grouped
//! total falls as rounds-per-stage grows, and the optimal group count
//! against its square-root heuristic.
//!
//! Run with: cargo run --example cost_model

use groupdebate::cost::{
    gd_cost_bound, gd_token_cost, mad_cost_bound, mad_token_cost, mad_token_cost_recurrence,
    optimal_group_count, CostParams,
};

fn params(agents: u64, sizes: &[u64], rounds: u64, intra: u64) -> CostParams {
    CostParams {
        agents,
        group_sizes: sizes.to_vec(),
        total_rounds: rounds,
        intra_rounds: intra,
        question_tokens: 100,
        output_tokens: 50,
        summary_tokens: 60,
    }
}

fn main() {
    // Per-round anatomy of one grouped debate.
    let p = params(4, &[2, 2], 4, 2);
    let gd = gd_token_cost(&p);
    println!("grouped debate, M=4 in [2,2], T=4, R=2  (Q=100, o=50, m=60)");
    println!("{:>6} {:>10} {:>9}", "round", "response", "summary");
    for row in &gd.rounds {
        println!("{:>6} {:>10} {:>9}", row.round, row.response_cost, row.summary_cost);
    }
    println!("{:>6} {:>10} {:>9}   total {}\n", "", gd.response_total(), gd.summary_total(), gd.total);

    // The fully-connected recurrence and its closed form agree everywhere.
    let mad_p = params(4, &[], 4, 1);
    let mad = mad_token_cost(&mad_p);
    assert_eq!(mad.total, mad_token_cost_recurrence(&mad_p));
    println!("fully-connected M=4, T=4: closed form = recurrence = {}", mad.total);

    // Bounds dominate the exact totals.
    println!(
        "bounds: fully-connected {} <= {}, grouped {} <= {}\n",
        mad.total,
        mad_cost_bound(&mad_p),
        gd.total,
        gd_cost_bound(&p)
    );

    // Table-style comparison across agent counts and round counts.
    println!("{:>2} {:>2} {:>12} {:>10} {:>10}", "M", "T", "fully-conn", "grouped", "saving");
    for (m, t) in [(4u64, 3u64), (4, 4), (5, 3), (5, 4), (6, 3), (6, 4)] {
        let half = m / 2;
        let sizes = vec![m - half, half];
        let mad_total = mad_token_cost(&params(m, &[], t, 1)).total;
        let gd_total = gd_token_cost(&params(m, &sizes, t, 2)).total;
        println!(
            "{:>2} {:>2} {:>12} {:>10} {:>9.1}%",
            m,
            t,
            mad_total,
            gd_total,
            100.0 * (1.0 - gd_total as f64 / mad_total as f64)
        );
    }

    // More rounds per stage means fewer stages, fewer summaries, lower cost.
    println!("\nM=4 in [2,2], T=4, varying rounds-per-stage:");
    for r in [1, 2, 4] {
        println!("  R={}  total {}", r, gd_token_cost(&params(4, &[2, 2], 4, r)).total);
    }

    // The optimal group count tracks sqrt(MT/S).
    println!("\noptimal group count (exact argmin vs heuristic):");
    for (m, t, s) in [(4u64, 4u64, 2u64), (8, 4, 2), (16, 4, 2), (16, 12, 3)] {
        let (n_star, n_heur) = optimal_group_count(m, t, s, 50, 60);
        println!("  M={m:>2} T={t:>2} S={s}: argmin N = {n_star}, heuristic = {n_heur}");
    }
}
