//! CSV and PGM output of profiles and sampled conic fields.

use std::io::{Read, Write};

use super::{Axis, ConicEvaluator, XRayProfile};
use crate::error::{Error, Result};
use crate::grid_geometry::{lerp_frac, Rect};

/// Writes `t_lo,t_hi,value` rows with a header line.
pub fn write_profile_csv<W: Write>(profile: &XRayProfile, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t_lo", "t_hi", "value"]).map_err(csv_error)?;
    for (k, v) in profile.values().iter().enumerate() {
        let bp = profile.breakpoints();
        w.write_record([bp[k].to_string(), bp[k + 1].to_string(), v.to_string()])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a profile written by [`write_profile_csv`]. Consecutive rows must
/// share their boundary.
pub fn read_profile_csv<R: Read>(input: R, axis: Axis) -> Result<XRayProfile> {
    let mut r = csv::Reader::from_reader(input);
    let mut breakpoints = Vec::new();
    let mut values = Vec::new();
    for (k, record) in r.records().enumerate() {
        // header is line 1
        let line = k + 2;
        let record = record.map_err(|e| Error::parse(line, e.to_string()))?;
        if record.len() != 3 {
            return Err(Error::parse(line, "expected t_lo,t_hi,value"));
        }
        let field = |i: usize| {
            record[i]
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(line, format!("bad number '{}'", &record[i])))
        };
        let (lo, hi, v) = (field(0)?, field(1)?, field(2)?);
        match breakpoints.last() {
            None => breakpoints.push(lo),
            Some(&prev) if prev != lo => return Err(Error::parse(line, "rows must be contiguous")),
            Some(_) => {}
        }
        breakpoints.push(hi);
        values.push(v);
    }
    XRayProfile::new(axis, breakpoints, values)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// `f` on a `p × q` lattice spanning `b`, corners included, row-major from
/// the bottom-left.
pub fn sample_field(e: &ConicEvaluator, b: &Rect, p: usize, q: usize) -> Result<Vec<(f64, f64, f64)>> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidParameter("lattice needs at least 2 points per axis".into()));
    }
    let mut out = Vec::with_capacity(p * q);
    for j in 0..q {
        let y = lerp_frac(b.c, b.d, j, q - 1);
        for i in 0..p {
            let x = lerp_frac(b.a, b.b, i, p - 1);
            out.push((x, y, e.eval(x, y)));
        }
    }
    Ok(out)
}

/// Writes `x,y,f` rows with a header line.
pub fn write_field_csv<W: Write>(samples: &[(f64, f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "f"]).map_err(csv_error)?;
    for (x, y, f) in samples {
        w.write_record([x.to_string(), y.to_string(), f.to_string()])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Plain 16-bit PGM of a `p × q` field from [`sample_field`], min-max
/// normalized, top row first.
pub fn write_field_pgm<W: Write>(samples: &[(f64, f64, f64)], p: usize, q: usize, mut out: W) -> Result<()> {
    if samples.len() != p * q {
        return Err(Error::InvalidParameter(format!("{} samples do not form a {p}x{q} lattice", samples.len())));
    }
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.2), hi.max(s.2)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    writeln!(out, "P2\n{p} {q}\n65535")?;
    for j in (0..q).rev() {
        let row: Vec<String> = (0..p)
            .map(|i| (((samples[j * p + i].2 - lo) / span) * 65535.0).round().to_string())
            .collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_geometry::{GridGeometry, GridSet};
    use crate::xray_conic::{conic_of, xray_v};

    #[test]
    fn profile_csv_round_trip() {
        let g = GridGeometry::unit(3, 2).unwrap();
        let l = GridSet::from_cells(g, [(0, 0), (1, 0), (1, 1)]).unwrap();
        let y = xray_v(&l);
        let mut buf = Vec::new();
        write_profile_csv(&y, &mut buf).unwrap();
        assert!(buf.starts_with(b"t_lo,t_hi,value\n0,1,1\n"));
        assert_eq!(read_profile_csv(buf.as_slice(), Axis::Vertical).unwrap(), y);
    }

    #[test]
    fn profile_csv_errors_carry_lines() {
        let gap = "t_lo,t_hi,value\n0,1,1\n2,3,1\n";
        assert!(matches!(read_profile_csv(gap.as_bytes(), Axis::Vertical), Err(Error::Parse { line: 3, .. })));
        let bad = "t_lo,t_hi,value\n0,1,x\n";
        assert!(matches!(read_profile_csv(bad.as_bytes(), Axis::Vertical), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn field_exports() {
        let g = GridGeometry::unit(1, 1).unwrap();
        let e = conic_of(&GridSet::full(g));
        let field = sample_field(&e, &g.rect(), 3, 3).unwrap();
        assert_eq!(field[4], (0.5, 0.5, 0.5));
        let mut csv_out = Vec::new();
        write_field_csv(&field, &mut csv_out).unwrap();
        assert_eq!(String::from_utf8(csv_out).unwrap().lines().count(), 10);
        let mut pgm = Vec::new();
        write_field_pgm(&field, 3, 3, &mut pgm).unwrap();
        let text = String::from_utf8(pgm).unwrap();
        assert!(text.starts_with("P2\n3 3\n65535\n"));
        assert_eq!(text.lines().nth(4).unwrap().split(' ').nth(1), Some("0"));
    }
}
