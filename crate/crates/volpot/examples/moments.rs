//! Prints the discrete moment defects of the planar generating functions.
//!
//! The order-`2M` convergence of the cubature rests on the generating
//! function reproducing monomials up to degree `2M - 1` under lattice
//! summation; every printed defect should sit at quadrature noise
//! (~1e-12 or below).

use volpot::genfun::{moment_defect, GeneratingOrder};

fn main() {
    println!("{:>3} {:>8} {:>12}", "M", "alpha", "defect");
    for m in 1..=3u32 {
        let order = GeneratingOrder::new(m, 2).unwrap();
        for a1 in 0..2 * m {
            for a2 in 0..(2 * m - a1) {
                let defect = moment_defect(order, &[a1, a2]).unwrap();
                println!("{m:>3} {:>8} {defect:>12.2e}", format!("({a1},{a2})"));
            }
        }
    }
}
