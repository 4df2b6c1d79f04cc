//! Closed-form cost-model table over a parameter grid.

use std::io::Write;

use rdlb_core::metrics::TheoryParams;

use crate::config::TheoryGrid;
use crate::error::Result;
use crate::matrix::num;

pub const THEORY_HEADER: &str =
    "n,q,t,lambda,C,T,p_fail,E_T,E_T_first_order,H_rdlb,H_checkpoint,C_threshold,rdlb_better,first_order_regime";

pub fn write_theory<W: Write>(mut w: W, grid: &TheoryGrid) -> Result<()> {
    let mut lines = vec![THEORY_HEADER.to_string()];
    for &n in &grid.n {
        for &q in &grid.q {
            for &t in &grid.t {
                for &lambda in &grid.lambda {
                    for &c in &grid.c {
                        let p = TheoryParams::new(n, q, t, lambda).with_checkpoint_cost(c);
                        let x = p.checkpoint_crossover()?;
                        lines.push(format!(
                            "{n},{q},{},{},{},{},{},{},{},{},{},{},{},{}",
                            num(t),
                            num(lambda),
                            num(c),
                            num(p.makespan()),
                            num(p.p_fail()),
                            num(p.expected_time_one_failure()?),
                            num(p.expected_time_first_order()?),
                            num(p.overhead_rdlb()?),
                            num(p.overhead_checkpoint()),
                            num(x.threshold),
                            x.rdlb_better,
                            x.first_order_regime
                        ));
                    }
                }
            }
        }
    }
    for l in &lines {
        writeln!(w, "{l}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_row_per_grid_point() {
        let grid = TheoryGrid::default();
        let mut buf = Vec::new();
        write_theory(&mut buf, &grid).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 3 * 3 * 3);
        assert!(text.lines().skip(1).all(|l| l.split(',').count() == 14));
    }

    #[test]
    fn bad_grid_is_an_error() {
        let grid = TheoryGrid {
            q: vec![1],
            ..Default::default()
        };
        assert!(write_theory(Vec::new(), &grid).is_err());
    }
}
