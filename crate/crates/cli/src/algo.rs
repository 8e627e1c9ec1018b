use std::fmt;

use clap::ValueEnum;
use hvbox::oracle::{volume_grid_sweep, volume_inclusion_exclusion, OracleBudget};
use hvbox::{hbda_i, hbda_ni, wfg_basic, wfg_incremental, wfg_sliced, StableSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    #[value(name = "hbda-ni")]
    HbdaNi,
    #[value(name = "hbda-i")]
    HbdaI,
    #[value(name = "wfg")]
    Wfg,
    #[value(name = "wfg-sliced")]
    WfgSliced,
    #[value(name = "wfg-incr")]
    WfgIncr,
    #[value(name = "oracle-ie")]
    OracleIe,
    #[value(name = "oracle-grid")]
    OracleGrid,
}

impl Algorithm {
    pub const EXACT: [Algorithm; 5] = [
        Algorithm::HbdaNi,
        Algorithm::HbdaI,
        Algorithm::Wfg,
        Algorithm::WfgSliced,
        Algorithm::WfgIncr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::HbdaNi => "hbda-ni",
            Algorithm::HbdaI => "hbda-i",
            Algorithm::Wfg => "wfg",
            Algorithm::WfgSliced => "wfg-sliced",
            Algorithm::WfgIncr => "wfg-incr",
            Algorithm::OracleIe => "oracle-ie",
            Algorithm::OracleGrid => "oracle-grid",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Volume plus whichever counters the algorithm keeps; the others stay 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Measurement {
    pub volume: f64,
    pub lubs_created: u64,
    pub lubs_retired: u64,
    pub dominance_tests: u64,
    pub wfg_calls_dim2: u64,
    pub wfg_calls_total: u64,
    pub limitset_points: u64,
}

pub fn compute(alg: Algorithm, set: &StableSet) -> hvbox::Result<Measurement> {
    let (pts, r) = (set.points(), set.reference());
    let lub = |volume: f64, c: &hvbox::lub::LubCounters| Measurement {
        volume,
        lubs_created: c.lubs_created,
        lubs_retired: c.lubs_retired,
        dominance_tests: c.dominance_tests,
        ..Default::default()
    };
    let wfg = |volume: f64, c: &hvbox::wfg::WfgCounters| Measurement {
        volume,
        wfg_calls_dim2: c.calls_at(2),
        wfg_calls_total: c.calls_total(),
        limitset_points: c.limitset_points_generated,
        ..Default::default()
    };
    let oracle = |volume: f64| Measurement {
        volume,
        ..Default::default()
    };
    Ok(match alg {
        Algorithm::HbdaNi => {
            let o = hbda_ni(set)?;
            lub(o.volume, &o.counters)
        }
        Algorithm::HbdaI => {
            let o = hbda_i(set)?;
            lub(o.volume, &o.counters)
        }
        Algorithm::Wfg => {
            let o = wfg_basic(pts, r)?;
            wfg(o.volume, &o.counters)
        }
        Algorithm::WfgSliced => {
            let o = wfg_sliced(pts, r)?;
            wfg(o.volume, &o.counters)
        }
        Algorithm::WfgIncr => {
            let o = wfg_incremental(pts, r)?;
            wfg(o.volume, &o.counters)
        }
        Algorithm::OracleIe => oracle(volume_inclusion_exclusion(
            pts,
            r,
            &OracleBudget::default(),
        )?),
        Algorithm::OracleGrid => oracle(volume_grid_sweep(pts, r, &OracleBudget::default())?),
    })
}

/// `%.17g`: 17 significant digits, trailing zeros dropped.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
