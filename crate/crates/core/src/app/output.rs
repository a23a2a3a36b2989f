//! CSV and SVG emission.
//!
//! Frequencies are written in units of `delta` and times in units of
//! `1 / delta`. Numbers carry 17 significant digits so that every `f64`
//! survives a write/read cycle unchanged.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::integrate::TimeSeries;
use crate::spectrum::{PeakSet, Spectrum};

pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(path: &str, e: csv::Error) -> Error {
    Error::InvalidConfig(format!("{path}: {e}"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn render(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// `Z1`, `X1` first, remaining channels alphabetically.
fn channel_order(ts: &TimeSeries) -> Vec<&str> {
    let mut names: Vec<&str> = ts.channels.keys().map(String::as_str).collect();
    names.sort_by_key(|n| match *n {
        "Z1" => (0, *n),
        "X1" => (1, *n),
        _ => (2, *n),
    });
    names
}

/// Strips a trailing ` [unit]` from a header field.
fn column_name(field: &str) -> &str {
    field.split_once(" [").map(|(n, _)| n).unwrap_or(field).trim()
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse `{s}` as a number"),
    })
}

pub fn timeseries_csv(ts: &TimeSeries, delta: f64) -> String {
    let names = channel_order(ts);
    let mut header = vec!["t [1/delta]".to_string()];
    header.extend(names.iter().map(|n| format!("{n} [1]")));
    let cols: Vec<&Vec<f64>> = names.iter().map(|n| &ts.channels[*n]).collect();
    let rows = ts.times.iter().enumerate().map(|(i, t)| {
        let mut row = vec![fmt_num(t * delta)];
        row.extend(cols.iter().map(|c| fmt_num(c[i])));
        row
    });
    render(&header, rows)
}

pub fn parse_timeseries_csv(text: &str) -> Result<TimeSeries> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| csv_err("timeseries", e))?
        .iter()
        .map(|h| column_name(h).to_string())
        .collect();
    if header.first().map(String::as_str) != Some("t") {
        return Err(Error::Parse {
            line: 1,
            message: "first column must be `t`".into(),
        });
    }
    let mut times = Vec::new();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); header.len() - 1];
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if rec.len() != header.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, got {}", header.len(), rec.len()),
            });
        }
        times.push(parse_f64(&rec[0], line)?);
        for (col, field) in cols.iter_mut().zip(rec.iter().skip(1)) {
            col.push(parse_f64(field, line)?);
        }
    }
    let channels: BTreeMap<String, Vec<f64>> = header.into_iter().skip(1).zip(cols).collect();
    TimeSeries::new(times, channels)
}

pub fn spectrum_csv(spec: &Spectrum, delta: f64) -> String {
    let header = ["omega [delta]".to_string(), format!("S_{} [1]", spec.channel)];
    render(
        &header,
        spec.omegas
            .iter()
            .zip(&spec.magnitudes)
            .map(|(w, s)| vec![fmt_num(w / delta), fmt_num(*s)]),
    )
}

/// `(omegas, magnitudes)` of a spectrum CSV.
pub fn parse_spectrum_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let mut omegas = Vec::new();
    let mut mags = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        omegas.push(parse_f64(&rec[0], line)?);
        mags.push(parse_f64(&rec[1], line)?);
    }
    Ok((omegas, mags))
}

pub fn peaks_csv(peaks: &PeakSet, delta: f64) -> String {
    let header = ["omega [delta]", "height [1]", "k", "l", "residual [delta]"].map(String::from);
    render(
        &header,
        peaks.peaks.iter().map(|p| {
            let (k, l) = match p.label {
                Some(c) => (c.k.to_string(), c.l.to_string()),
                None => (String::new(), String::new()),
            };
            let residual = p.residual.map(|r| fmt_num(r / delta)).unwrap_or_default();
            vec![fmt_num(p.omega / delta), fmt_num(p.height), k, l, residual]
        }),
    )
}

pub fn write_timeseries_csv(path: &Path, ts: &TimeSeries, delta: f64) -> Result<()> {
    write_file(path, &timeseries_csv(ts, delta))
}

pub fn read_timeseries_csv(path: &Path) -> Result<TimeSeries> {
    parse_timeseries_csv(&read_file(path)?)
}

pub fn write_spectrum_csv(path: &Path, spec: &Spectrum, delta: f64) -> Result<()> {
    write_file(path, &spectrum_csv(spec, delta))
}

pub fn write_peaks_csv(path: &Path, peaks: &PeakSet, delta: f64) -> Result<()> {
    write_file(path, &peaks_csv(peaks, delta))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_file(path, text)
}

const W: f64 = 900.0;
const H: f64 = 420.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 36.0;
const MB: f64 = 48.0;

fn svg_open(out: &mut String, title: &str, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{height}" viewBox="0 0 {W} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Axis frame with tick labels. `y_ticks` are `(position in data units, label)`.
fn frame(out: &mut String, top: f64, height: f64, x: (f64, f64), x_label: &str, y_ticks: &[(f64, String)], y_label: &str, y_map: &dyn Fn(f64) -> f64) {
    let (x0, x1) = x;
    let pw = W - ML - MR;
    let _ = writeln!(
        out,
        r#"<rect x="{ML}" y="{top}" width="{pw}" height="{height}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let v = x0 + (x1 - x0) * i as f64 / 5.0;
        let px = ML + pw * i as f64 / 5.0;
        let _ = writeln!(
            out,
            r#"<line x1="{px:.1}" y1="{b:.1}" x2="{px:.1}" y2="{b2:.1}" stroke="black"/><text x="{px:.1}" y="{t:.1}" text-anchor="middle">{}</text>"#,
            tick_label(v),
            b = top + height,
            b2 = top + height + 4.0,
            t = top + height + 16.0
        );
    }
    for (v, label) in y_ticks {
        let py = y_map(*v);
        let _ = writeln!(
            out,
            r##"<line x1="{ML}" y1="{py:.1}" x2="{r:.1}" y2="{py:.1}" stroke="#ddd"/><text x="{lx:.1}" y="{ty:.1}" text-anchor="end">{label}</text>"##,
            r = W - MR,
            lx = ML - 6.0,
            ty = py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        ML + pw / 2.0,
        top + height + 34.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{y:.1}" text-anchor="middle" transform="rotate(-90 16 {y:.1})">{}</text>"#,
        escape(y_label),
        y = top + height / 2.0
    );
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// `(column, min, max)` envelopes of `ys` over `cols` equal-width columns of `xs`.
fn envelope(xs: &[f64], ys: &[f64], x0: f64, x1: f64, cols: usize) -> Vec<(usize, f64, f64)> {
    let mut env: Vec<Option<(f64, f64)>> = vec![None; cols];
    for (x, y) in xs.iter().zip(ys) {
        if !(x0..=x1).contains(x) || !y.is_finite() {
            continue;
        }
        let c = (((x - x0) / (x1 - x0)) * (cols - 1) as f64).round() as usize;
        env[c] = Some(match env[c] {
            None => (*y, *y),
            Some((lo, hi)) => (lo.min(*y), hi.max(*y)),
        });
    }
    env.into_iter()
        .enumerate()
        .filter_map(|(c, e)| e.map(|(lo, hi)| (c, lo, hi)))
        .collect()
}

/// Log-magnitude spectrum with the largest labelled peaks annotated `(k,l)`.
pub fn spectrum_svg(spec: &Spectrum, peaks: &PeakSet, delta: f64, title: &str) -> String {
    let mut out = String::new();
    svg_open(&mut out, title, H);
    let omegas: Vec<f64> = spec.omegas.iter().map(|w| w / delta).collect();
    let x0 = 0.0;
    let x1 = omegas.last().copied().unwrap_or(1.0).max(1e-12);
    let top_val = spec.max_magnitude().max(1e-300);
    let floor = (top_val * 1e-7).max(1e-300);
    let (ly0, ly1) = (floor.log10().floor(), top_val.log10().ceil().max(floor.log10().floor() + 1.0));
    let ph = H - MT - MB;
    let pw = W - ML - MR;
    let y_map = move |v: f64| MT + ph * (1.0 - (v.max(floor).log10() - ly0) / (ly1 - ly0));
    let ticks: Vec<(f64, String)> = (ly0 as i32..=ly1 as i32).map(|e| (10f64.powi(e), format!("1e{e}"))).collect();
    frame(&mut out, MT, ph, (x0, x1), "omega / delta", &ticks, &format!("S_{}", spec.channel), &y_map);

    let cols = pw as usize;
    let env = envelope(&omegas, &spec.magnitudes, x0, x1, cols);
    let mut path = String::new();
    for (i, (c, _, hi)) in env.iter().enumerate() {
        let px = ML + pw * *c as f64 / (cols - 1) as f64;
        let _ = write!(path, "{}{px:.1},{:.1}", if i == 0 { "M" } else { " L" }, y_map(*hi));
    }
    let _ = writeln!(out, r##"<path d="{path}" fill="none" stroke="#1f4e9c" stroke-width="0.8"/>"##);

    let mut labelled: Vec<_> = peaks.peaks.iter().filter(|p| p.label.is_some()).collect();
    labelled.sort_by(|a, b| b.height.total_cmp(&a.height));
    for p in labelled.into_iter().take(24) {
        let c = p.label.unwrap();
        let px = ML + pw * (p.omega / delta - x0) / (x1 - x0);
        let py = y_map(p.height);
        let color = if c.is_mixed() { "#c0392b" } else { "#333" };
        let _ = writeln!(
            out,
            r#"<circle cx="{px:.1}" cy="{py:.1}" r="2" fill="{color}"/><text x="{px:.1}" y="{ty:.1}" text-anchor="middle" fill="{color}" font-size="9">({},{})</text>"#,
            c.k,
            c.l,
            ty = py - 5.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One linear panel per channel (min/max envelope per pixel column).
pub fn trajectory_svg(ts: &TimeSeries, delta: f64, title: &str) -> String {
    let names = channel_order(ts);
    let panel = 200.0;
    let gap = MB;
    let height = MT + names.len() as f64 * (panel + gap);
    let mut out = String::new();
    svg_open(&mut out, title, height);
    let times: Vec<f64> = ts.times.iter().map(|t| t * delta).collect();
    let x0 = times.first().copied().unwrap_or(0.0);
    let x1 = times.last().copied().unwrap_or(1.0).max(x0 + 1e-12);
    let pw = W - ML - MR;
    let cols = pw as usize;
    for (k, name) in names.iter().enumerate() {
        let top = MT + k as f64 * (panel + gap);
        let ys = &ts.channels[*name];
        let lo = ys.iter().copied().fold(f64::INFINITY, f64::min).min(-1e-12);
        let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(1e-12);
        let pad = 0.05 * (hi - lo);
        let (y0, y1) = (lo - pad, hi + pad);
        let y_map = move |v: f64| top + panel * (1.0 - (v - y0) / (y1 - y0));
        let ticks: Vec<(f64, String)> = (0..=4)
            .map(|i| {
                let v = y0 + (y1 - y0) * i as f64 / 4.0;
                (v, tick_label(v))
            })
            .collect();
        frame(&mut out, top, panel, (x0, x1), "t * delta", &ticks, name, &y_map);
        let mut path = String::new();
        for (c, lo, hi) in envelope(&times, ys, x0, x1, cols) {
            let px = ML + pw * c as f64 / (cols - 1) as f64;
            let _ = write!(path, "M{px:.1},{:.1} L{px:.1},{:.1} ", y_map(lo), y_map(hi) + 0.01);
        }
        let _ = writeln!(out, r##"<path d="{}" fill="none" stroke="#1f4e9c" stroke-width="1"/>"##, path.trim_end());
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{compute_spectrum, find_peaks, CombinationLabel, Peak, Window};

    fn series() -> TimeSeries {
        let times: Vec<f64> = (0..2048).map(|i| i as f64 * 0.1).collect();
        let mut ch = BTreeMap::new();
        ch.insert("Z1".to_string(), times.iter().map(|t| (1.3 * t).sin() / 3.0).collect());
        ch.insert("X1".to_string(), times.iter().map(|t| (0.7 * t).cos()).collect());
        TimeSeries::new(times, ch).unwrap()
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn timeseries_columns_and_round_trip() {
        let ts = series();
        let text = timeseries_csv(&ts, 1.0);
        assert_eq!(text.lines().next().unwrap(), "t [1/delta],Z1 [1],X1 [1]");
        assert_eq!(text.lines().count(), 2049);
        let back = parse_timeseries_csv(&text).unwrap();
        assert_eq!(back.times, ts.times);
        assert_eq!(back.channels, ts.channels);
    }

    #[test]
    fn spectrum_columns() {
        let spec = compute_spectrum(&series(), "Z1", 0.0, Window::Rect).unwrap();
        let text = spectrum_csv(&spec, 1.0);
        assert_eq!(text.lines().next().unwrap(), "omega [delta],S_Z1 [1]");
        let (w, s) = parse_spectrum_csv(&text).unwrap();
        assert_eq!(w, spec.omegas);
        assert_eq!(s, spec.magnitudes);
    }

    #[test]
    fn unlabeled_peaks_have_empty_fields() {
        let peaks = PeakSet {
            peaks: vec![
                Peak {
                    omega: 1.0,
                    height: 0.5,
                    bin: 3,
                    label: None,
                    residual: None,
                },
                Peak {
                    omega: 2.0,
                    height: 0.25,
                    bin: 6,
                    label: Some(CombinationLabel { k: 2, l: -1 }),
                    residual: Some(0.0),
                },
            ],
        };
        let text = peaks_csv(&peaks, 1.0);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "omega [delta],height [1],k,l,residual [delta]");
        assert!(lines[1].ends_with(",,,"), "{}", lines[1]);
        assert!(lines[2].contains(",2,-1,"), "{}", lines[2]);
    }

    #[test]
    fn malformed_csv_reports_line() {
        let err = parse_timeseries_csv("t,Z1\n0,1\n0.1,x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn svg_is_self_contained() {
        let ts = series();
        let spec = compute_spectrum(&ts, "Z1", 0.0, Window::Rect).unwrap();
        let peaks = find_peaks(&spec, 0.01, 0.01).unwrap();
        for svg in [spectrum_svg(&spec, &peaks, 1.0, "S_Z"), trajectory_svg(&ts, 1.0, "traj")] {
            assert!(svg.starts_with("<svg xmlns="));
            assert!(svg.trim_end().ends_with("</svg>"));
            assert!(!svg.contains("href"));
        }
    }
}
