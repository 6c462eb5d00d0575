//! Sweep tables as CSV with a header row and a schema-version column.
//!
//! Reals carry 12 significant digits; quantities undefined on a row
//! are left empty.

use std::io::{self, Write};

use qubit_frir::solver::{DegreeRow, RateRow, SweepTable};

pub const SCHEMA_VERSION: u32 = 1;

const DEGREE_HEADER: &str = "schema_version,q,p_i,p_bar,lambda1,lambda2,eta0,eta1,eta2,branch";
const RATE_HEADER: &str = "schema_version,failure_rate,r_cor,p_cor,p_err,q_used,regime";

fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        String::new()
    }
}

fn degree_line(r: &DegreeRow) -> String {
    let reals = [r.q, r.p_i, r.p_bar, r.lambda1, r.lambda2, r.eta0, r.eta1, r.eta2].map(real);
    format!("{SCHEMA_VERSION},{},{}", reals.join(","), r.branch)
}

fn rate_line(r: &RateRow) -> String {
    let reals = [r.failure_rate, r.r_cor, r.p_cor, r.p_err, r.q_used].map(real);
    format!("{SCHEMA_VERSION},{},{}", reals.join(","), r.regime)
}

pub fn write_table(out: &mut impl Write, table: &SweepTable) -> io::Result<()> {
    match table {
        SweepTable::Degree(rows) => {
            writeln!(out, "{DEGREE_HEADER}")?;
            for r in rows {
                writeln!(out, "{}", degree_line(r))?;
            }
        }
        SweepTable::FailureRate(rows) => {
            writeln!(out, "{RATE_HEADER}")?;
            for r in rows {
                writeln!(out, "{}", rate_line(r))?;
            }
        }
    }
    out.flush()
}
