//! Frozen per-class tables for (3/4)·N(ε, δ) and #C(ε, δ), checked against
//! direct enumeration and against the closed grid.

use kloost::distribution::{count_grid_closed, count_grid_direct, CountGrid};
use kloost::FieldContext;

/// (coef, shift, constant) meaning coef·2^{m/2 + shift} + constant.
type Cell = (i64, i32, i64);

/// (3/4)·N(ε, δ) - 2^{m-4}, columns (0,0), (0,1), (1,0), (1,1).
fn three_quarter_n_row(m: u32) -> [Cell; 4] {
    match m % 24 {
        0 => [(-9, -3, -1), (7, -3, 0), (1, -3, 0), (1, -3, 0)],
        6 | 18 => [(3, -2, -1), (-1, -1, 0), (1, -2, 0), (-1, -1, 0)],
        12 => [(-3, -3, -1), (1, -3, 0), (-5, -3, 0), (7, -3, 0)],
        8 | 16 => [(-3, -2, -1), (1, -1, 0), (1, -1, 0), (-1, -2, 0)],
        2 | 22 | 10 | 14 => [(3, -3, -1), (-1, -3, 0), (-1, -3, 0), (-1, -3, 0)],
        4 | 20 => [(0, 0, -1), (-1, -2, 0), (-1, -2, 0), (1, -1, 0)],
        _ => unreachable!("odd m"),
    }
}

/// #C(ε, δ) - 2^{m-2}.
fn c_row(m: u32) -> [Cell; 4] {
    match m % 8 {
        0 => [(-1, 0, -2), (1, 0, 0), (0, 0, 0), (0, 0, 0)],
        2 | 6 => [(1, -1, -2), (-1, -1, 0), (1, -1, 0), (-1, -1, 0)],
        4 => [(0, 0, -2), (0, 0, 0), (-1, 0, 0), (1, 0, 0)],
        _ => unreachable!("odd m"),
    }
}

/// Value times 8, so that 2^{m/2 - 3} stays integral at m = 2.
fn eval8((coef, shift, constant): Cell, m: u32) -> i128 {
    coef as i128 * (1i128 << (m as i32 / 2 + shift + 3)) + 8 * constant as i128
}

fn check(grid: &CountGrid) {
    let m = grid.m;
    let nr = three_quarter_n_row(m);
    let cr = c_row(m);
    for (i, (eps, delta)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
        let n = grid.n[eps][delta] as i128;
        // 8·(3/4)·N = 6·N.
        assert_eq!(6 * n, eval8(nr[i], m) + (8i128 << (m - 4)), "m = {m}, N({eps},{delta})");
        let c = grid.c[eps][delta] as i128;
        assert_eq!(8 * c, eval8(cr[i], m) + (8i128 << (m - 2)), "m = {m}, #C({eps},{delta})");
    }
}

#[test]
fn frozen_tables_match_enumeration() {
    for m in (4..=18).step_by(2) {
        let f = FieldContext::with_degree(m).unwrap();
        check(&count_grid_direct(&f).unwrap());
    }
}

#[test]
fn frozen_tables_match_closed_grid() {
    for m in (4..=60).step_by(2) {
        check(&count_grid_closed(m).unwrap());
    }
}

#[test]
fn n12_value() {
    let g = count_grid_closed(12).unwrap();
    assert_eq!(g.n[0][0], 308);
}
