#![allow(dead_code)]

use minitwistor::curve::{make_branch_config, BranchConfig};
use proptest::prelude::*;

pub const GENUS_ONE: [f64; 4] = [-3.0, -1.0, 1.0, 3.0];
pub const GENUS_TWO: [f64; 6] = [-5.0, -3.0, -1.0, 1.0, 3.0, 5.0];

pub fn cfg(points: &[f64]) -> BranchConfig {
    make_branch_config(points).expect("valid branch points")
}

/// Sorted branch points for `n` in `ns`, with gaps bounded away from zero.
pub fn branch_points(ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    ns.prop_flat_map(|n| {
        (-5.0f64..0.0, prop::collection::vec(0.4f64..2.5, 2 * n - 1)).prop_map(|(start, gaps)| {
            let mut pts = vec![start];
            for g in gaps {
                pts.push(pts.last().unwrap() + g);
            }
            pts
        })
    })
}

/// Branch points on the grid `Z / 8`, so they are exact binary rationals.
pub fn dyadic_points(ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    ns.prop_flat_map(|n| {
        (-40i32..0, prop::collection::vec(1i32..20, 2 * n - 1)).prop_map(|(start, gaps)| {
            let mut k = vec![start];
            for g in gaps {
                k.push(k.last().unwrap() + g);
            }
            k.into_iter().map(|x| x as f64 / 8.0).collect()
        })
    })
}
