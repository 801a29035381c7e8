//! Table, sweep and verify commands.

use anyhow::{bail, Result};
use clonelab::cvclone::{gaussian_clone, optimal_fidelity};
use clonelab::phasecov::{mub_symmetric_fidelity, phase_qudit_optimal};
use clonelab::qkd::{disturbance_di, king_eve_max, standard_disturbance_di, standard_qkd_eve, QkdProtocol};
use clonelab::uqcm::{uqcm_f1, uqcm_fm};
use clonelab::verify::{find_criterion, run_criterion, Check, Criterion, Report};
use clonelab::C64;
use rayon::prelude::*;

use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// Universal N → M fidelities.
    Uqcm,
    /// Optimal 1 → 2 phase-covariant fidelity per d.
    Phase,
    /// Symmetric fidelity of the g+1 MUB cloner.
    Mub,
    /// D_I of the retrodiction protocol next to the standard protocol.
    King,
    /// Same table as `king`.
    KingDi,
    /// Simulated Gaussian N → M cloner.
    Cv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Protocol {
    /// Eve's best fidelity on the retrodiction protocol, one curve per (d, g).
    King,
    /// Qubit retrodiction protocol (g = 1, 2) against BB84 and six-state.
    Compare,
}

/// Parameter lists common to the table and sweep commands.
#[derive(Debug, Clone, Default)]
pub struct Params {
    pub d: Option<Vec<usize>>,
    pub n: Option<Vec<usize>>,
    pub m: Option<Vec<usize>>,
    pub g: Option<Vec<usize>>,
    pub grid: Option<Vec<f64>>,
}

fn or(v: &Option<Vec<usize>>, default: impl IntoIterator<Item = usize>) -> Vec<usize> {
    v.clone().unwrap_or_else(|| default.into_iter().collect())
}

/// (d, g) pairs with g ≤ d; every g when none are given.
fn dg_pairs(p: &Params, d_default: &[usize]) -> Vec<(usize, usize)> {
    or(&p.d, d_default.iter().copied())
        .into_iter()
        .flat_map(|d| or(&p.g, 1..=d).into_iter().filter(move |&g| g >= 1 && g <= d).map(move |g| (d, g)))
        .collect()
}

pub fn table(family: Family, p: &Params) -> Result<Table> {
    match family {
        Family::Uqcm => {
            let mut t = Table::new(vec!["d", "N", "M", "F", "F_global"]);
            for d in or(&p.d, [2]) {
                for n in or(&p.n, [1]) {
                    for m in or(&p.m, 2..=5).into_iter().filter(|&m| m >= n) {
                        if d < 2 || n == 0 {
                            bail!("need d >= 2 and N >= 1");
                        }
                        t.push(vec![
                            Cell::Int(d),
                            Cell::Int(n),
                            Cell::Int(m),
                            Cell::Num(uqcm_f1(d, n, m)),
                            Cell::Num(uqcm_fm(d, n, m)),
                        ]);
                    }
                }
            }
            Ok(t)
        }
        Family::Phase => {
            let mut t = Table::new(vec!["d", "F_phase", "F_universal"]);
            for d in or(&p.d, 2..=7) {
                if d < 2 {
                    bail!("need d >= 2");
                }
                t.push(vec![Cell::Int(d), Cell::Num(phase_qudit_optimal(d).2), Cell::Num(uqcm_f1(d, 1, 2))]);
            }
            Ok(t)
        }
        Family::Mub => {
            let mut t = Table::new(vec!["d", "g", "F"]);
            for (d, g) in dg_pairs(p, &[2, 3, 5, 7]) {
                t.push(vec![Cell::Int(d), Cell::Int(g), Cell::Num(mub_symmetric_fidelity(d, g)?)]);
            }
            Ok(t)
        }
        Family::King | Family::KingDi => {
            let pairs = dg_pairs(p, &[2, 3, 5, 7]);
            let rows: Vec<Result<Vec<Cell>>> = pairs
                .par_iter()
                .map(|&(d, g)| {
                    Ok(vec![
                        Cell::Int(d),
                        Cell::Int(g),
                        Cell::Num(disturbance_di(d, g)?),
                        Cell::Num(standard_disturbance_di(d, g)?),
                    ])
                })
                .collect();
            let mut t = Table::new(vec!["d", "g", "D_I", "D_I_standard"]);
            for row in rows {
                t.push(row?);
            }
            Ok(t)
        }
        Family::Cv => {
            let mut t = Table::new(vec!["N", "M", "added_variance", "F", "F_optimal"]);
            for n in or(&p.n, [1]) {
                for m in or(&p.m, 2..=5).into_iter().filter(|&m| m >= n) {
                    let rep = gaussian_clone(n, m, C64::new(1.0, 0.5))?;
                    t.push(vec![
                        Cell::Int(n),
                        Cell::Int(m),
                        Cell::Num(rep.added_variance[0].0),
                        Cell::Num(rep.overlap_fidelity[0]),
                        Cell::Num(optimal_fidelity(n, m)),
                    ]);
                }
            }
            Ok(t)
        }
    }
}

fn check_grid(grid: &[f64], d: usize) -> Result<()> {
    let lo = 1.0 / d as f64;
    if let Some(f) = grid.iter().find(|f| !(lo - 1e-12..=1.0 + 1e-12).contains(*f)) {
        bail!("F_Bob = {f} outside [1/d, 1] for d = {d}");
    }
    Ok(())
}

pub fn sweep(protocol: Protocol, p: &Params) -> Result<Table> {
    match protocol {
        Protocol::King => {
            let pairs = dg_pairs(p, &[5]);
            let mut cells = vec![];
            for &(d, g) in &pairs {
                let grid = p.grid.clone().unwrap_or_else(|| {
                    let lo = 1.0 / d as f64;
                    (0..=20).map(|k| lo + (1.0 - lo) * k as f64 / 20.0).collect()
                });
                check_grid(&grid, d)?;
                cells.extend(grid.into_iter().map(|f| (d, g, f)));
            }
            let rows: Vec<Result<Vec<Cell>>> = cells
                .par_iter()
                .map(|&(d, g, f)| {
                    Ok(vec![Cell::Int(d), Cell::Int(g), Cell::Num(f), Cell::Num(king_eve_max(d, g, f)?)])
                })
                .collect();
            let mut t = Table::new(vec!["d", "g", "F_Bob", "F_Eve"]);
            for row in rows {
                t.push(row?);
            }
            Ok(t)
        }
        Protocol::Compare => {
            if p.d.as_ref().is_some_and(|d| d != &[2]) {
                bail!("the comparison sweep is for d = 2");
            }
            let grid = p.grid.clone().unwrap_or_else(|| (0..23).map(|k| 0.55 + 0.02 * k as f64).collect());
            check_grid(&grid, 2)?;
            let rows: Vec<Result<Vec<Cell>>> = grid
                .par_iter()
                .map(|&f| {
                    Ok(vec![
                        Cell::Num(f),
                        Cell::Num(king_eve_max(2, 1, f)?),
                        Cell::Num(king_eve_max(2, 2, f)?),
                        Cell::Num(standard_qkd_eve(f, QkdProtocol::Bb84)?),
                        Cell::Num(standard_qkd_eve(f, QkdProtocol::SixState)?),
                    ])
                })
                .collect();
            let mut t = Table::new(vec!["F_Bob", "F_Eve_king_g1", "F_Eve_king_g2", "F_Eve_bb84", "F_Eve_six_state"]);
            for row in rows {
                t.push(row?);
            }
            Ok(t)
        }
    }
}

/// Selected criteria, each with the check-name prefixes to keep (empty keeps all).
pub fn select(selectors: &[String]) -> Result<Vec<(Criterion, Vec<String>)>, String> {
    let mut out: Vec<(Criterion, Vec<String>)> = vec![];
    for s in selectors {
        let (c, prefix) = match find_criterion(s) {
            Some(c) => (c, None),
            None => {
                let key = s.split('/').next().unwrap_or_default();
                match find_criterion(key) {
                    Some(c) => (c, Some(s.clone())),
                    None => return Err(format!("unknown check {s:?}")),
                }
            }
        };
        match out.iter_mut().find(|(k, _)| k.id == c.id) {
            Some((_, prefixes)) => match prefix {
                Some(pr) if !prefixes.is_empty() => prefixes.push(pr),
                _ => prefixes.clear(),
            },
            None => out.push((c, prefix.into_iter().collect())),
        }
    }
    out.sort_by_key(|(c, _)| c.id);
    Ok(out)
}

pub fn verify(selection: &[(Criterion, Vec<String>)], tol: Option<f64>) -> Result<Report> {
    let mut checks: Vec<Check> = vec![];
    for (c, prefixes) in selection {
        let all = run_criterion(*c);
        let kept: Vec<Check> = if prefixes.is_empty() {
            all
        } else {
            all.into_iter().filter(|ch| prefixes.iter().any(|p| ch.name.starts_with(p.as_str()))).collect()
        };
        if kept.is_empty() {
            bail!("no check matches {}", prefixes.join(", "));
        }
        checks.extend(kept);
    }
    if let Some(t) = tol {
        checks = checks.into_iter().map(|c| c.with_tol(t)).collect();
    }
    Ok(Report::new(checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Params {
        Params::default()
    }

    #[test]
    fn uqcm_rows() {
        let p = Params { d: Some(vec![2]), n: Some(vec![1]), m: Some(vec![2, 3, 4, 5]), ..params() };
        let t = table(Family::Uqcm, &p).unwrap();
        assert_eq!(t.rows.len(), 4);
        for row in &t.rows {
            let Cell::Int(m) = row[2] else { panic!() };
            let Cell::Num(f) = row[3] else { panic!() };
            let m = m as f64;
            assert!((f - (2.0 * m + 1.0) / (3.0 * m)).abs() < 1e-15);
        }
    }

    #[test]
    fn mub_pairs_respect_g_le_d() {
        let p = Params { d: Some(vec![2, 3]), g: Some(vec![1, 3]), ..params() };
        let t = table(Family::Mub, &p).unwrap();
        let dg: Vec<_> = t.rows.iter().map(|r| (r[0], r[1])).collect();
        assert_eq!(dg, [(Cell::Int(2), Cell::Int(1)), (Cell::Int(3), Cell::Int(1)), (Cell::Int(3), Cell::Int(3))]);
        assert!(table(Family::Mub, &Params { d: Some(vec![4]), ..params() }).is_err());
    }

    #[test]
    fn cv_one_to_two() {
        let p = Params { n: Some(vec![1]), m: Some(vec![2]), ..params() };
        let t = table(Family::Cv, &p).unwrap();
        let Cell::Num(f) = t.rows[0][3] else { panic!() };
        assert!((f - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_grid_range() {
        let p = Params { d: Some(vec![3]), g: Some(vec![1]), grid: Some(vec![0.2]), ..params() };
        assert!(sweep(Protocol::King, &p).is_err());
        assert!(sweep(Protocol::Compare, &Params { d: Some(vec![3]), ..params() }).is_err());
    }

    #[test]
    fn selectors() {
        let s = select(&["cv".into(), "universal/headline".into(), "8".into()]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].0.id, s[0].1.clone()), (1, vec!["universal/headline".to_string()]));
        assert!(s[1].1.is_empty());
        let s = select(&["universal/headline".into(), "universal".into()]).unwrap();
        assert!(s[0].1.is_empty());
        assert!(select(&["bogus".into()]).is_err());
    }
}
