//! CSV emission. All floating values are printed with 12 significant digits
//! and LF line endings; every file starts with a `# params:` comment line
//! carrying the canonical parameter serialization.

use std::io::{self, Write};

use fqb_core::{
    CrossValidation, KickSeries, LandscapeRow, SweepAxis, SweepResult, ValidationPoint,
};

/// Formats with the given number of significant digits, trimming trailing
/// zeros, in the style of printf `%g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponential format");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    if exponent < -4 || exponent >= digits as i32 {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    }
}

fn sig(x: f64) -> String {
    format_significant(x, 12)
}

/// Writes `n,delta_e,power` rows, one per kick including n = 0. When the
/// series carries entropies, both log bases are emitted as extra columns
/// (`entropy_e`, `entropy_log2`); series entropies are stored in natural
/// log, so the base-2 column is the same value divided by ln 2.
pub fn write_series_csv<W: Write>(mut w: W, series: &KickSeries) -> io::Result<()> {
    writeln!(w, "# params: {}", series.params.canonical_line())?;
    let with_entropy = series.records.first().is_some_and(|r| r.entropy.is_some());
    if with_entropy {
        writeln!(w, "n,delta_e,power,entropy_e,entropy_log2")?;
    } else {
        writeln!(w, "n,delta_e,power")?;
    }
    for record in &series.records {
        match record.entropy {
            Some(s) => writeln!(
                w,
                "{},{},{},{},{}",
                record.n,
                sig(record.delta_e),
                sig(record.power),
                sig(s),
                sig(s / std::f64::consts::LN_2),
            )?,
            None => writeln!(
                w,
                "{},{},{}",
                record.n,
                sig(record.delta_e),
                sig(record.power)
            )?,
        }
    }
    Ok(())
}

/// Writes `value,delta_e_max,n_star,p_max,period` rows in axis order; an
/// absent period is an empty field.
pub fn write_sweep_csv<W: Write>(mut w: W, sweep: &SweepResult) -> io::Result<()> {
    writeln!(w, "# params: {}", sweep.base_params.canonical_line())?;
    writeln!(w, "# axis: {}, n_max: {}", sweep.axis, sweep.n_max)?;
    writeln!(w, "value,delta_e_max,n_star,p_max,period")?;
    for point in &sweep.points {
        let value = if sweep.axis == SweepAxis::Size {
            format!("{}", point.value as usize)
        } else {
            sig(point.value)
        };
        let period = point.period.map_or(String::new(), |p| p.to_string());
        writeln!(
            w,
            "{},{},{},{},{}",
            value,
            sig(point.delta_e_max),
            point.n_star,
            sig(point.p_max),
            period
        )?;
    }
    Ok(())
}

/// Writes the structural-landscape table: measured maxima next to the
/// tabulated predictions and match flags; the alternative prediction columns
/// are filled only where the reference sources disagree.
pub fn write_landscape_csv<W: Write>(
    mut w: W,
    n_sites: usize,
    rows: &[LandscapeRow],
) -> io::Result<()> {
    writeln!(w, "# landscape for n_sites={n_sites}, J=1, hz=1, omega=1")?;
    writeln!(
        w,
        "range,dynamics,boundary,tau,delta_e_max,n_star,prediction,matches,alt_prediction,alt_matches"
    )?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            row.range,
            if row.nonintegrable {
                "nonintegrable"
            } else {
                "integrable"
            },
            row.boundary,
            row.tau,
            sig(row.delta_e_max),
            row.n_star,
            row.prediction,
            row.matches,
            row.alt_prediction.map_or(String::new(), |p| p.to_string()),
            row.alt_matches.map_or(String::new(), |m| m.to_string()),
        )?;
    }
    Ok(())
}

/// Writes one row per validation grid point with the observed deviations.
pub fn write_validation_csv<W: Write>(
    mut w: W,
    results: &[(ValidationPoint, CrossValidation)],
) -> io::Result<()> {
    writeln!(
        w,
        "n_sites,range,boundary,hx,tau0,tau1,max_amp_dev,max_energy_dev,pass"
    )?;
    for (point, result) in results {
        let p = &point.params;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            p.n_sites,
            p.range,
            p.boundary,
            sig(p.h_x),
            sig(p.tau0),
            sig(p.tau1),
            sig(result.max_amp_dev),
            sig(result.max_energy_dev),
            result.pass
        )?;
    }
    Ok(())
}
