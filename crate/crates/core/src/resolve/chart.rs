use std::fmt::Write as _;
use std::str::FromStr;

use super::ext::ExtChart;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartFormat {
    Ascii,
    Csv,
    Svg,
}

impl FromStr for ChartFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "ascii" => Ok(ChartFormat::Ascii),
            "csv" => Ok(ChartFormat::Csv),
            "svg" => Ok(ChartFormat::Svg),
            _ => Err(Error::Invalid(format!(
                "unknown chart format `{s}` (ascii, csv, svg)"
            ))),
        }
    }
}

/// Plot range in Adams coordinates `(t - s, s)`.
fn extent(c: &ExtChart) -> Option<(i32, i32, usize)> {
    let xs = c.entries.keys().map(|&(s, t)| t - s as i32);
    let lo = xs.clone().min()?;
    let hi = xs.max()?;
    let top = c.entries.keys().map(|k| k.0).max()?;
    Some((lo, hi, top))
}

pub fn render_chart(c: &ExtChart, format: ChartFormat) -> String {
    match format {
        ChartFormat::Csv => csv(c),
        ChartFormat::Ascii => ascii(c),
        ChartFormat::Svg => svg(c),
    }
}

fn csv(c: &ExtChart) -> String {
    let mut out = String::from("s,t,dim\n");
    for (&(s, t), &n) in &c.entries {
        writeln!(out, "{s},{t},{n}").unwrap();
    }
    out
}

/// One row per `s`, top down; columns are `t - s`. A cell shows the
/// dimension, `*` past 9, `.` for zero.
fn ascii(c: &ExtChart) -> String {
    let Some((lo, hi, top)) = extent(c) else {
        return String::new();
    };
    let width = (hi - lo + 1) as usize;
    let mut out = String::new();
    for s in (0..=top).rev() {
        let mut row = vec!['.'; width];
        for (&(ss, t), &n) in &c.entries {
            if ss == s {
                let x = (t - s as i32 - lo) as usize;
                row[x] = char::from_digit(n as u32, 10).unwrap_or('*');
            }
        }
        writeln!(
            out,
            "{s:>3} | {}",
            row.iter()
                .map(|ch| ch.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )
        .unwrap();
    }
    writeln!(out, "    +-{}", "--".repeat(width)).unwrap();
    let labels: Vec<String> = (lo..=hi).map(|x| (x.rem_euclid(10)).to_string()).collect();
    writeln!(out, "      {}   (t-s from {lo})", labels.join(" ")).unwrap();
    out
}

const CELL: i32 = 20;

fn svg(c: &ExtChart) -> String {
    let (lo, hi, top) = extent(c).unwrap_or((0, 0, 0));
    let (w, h) = ((hi - lo + 2) * CELL, (top as i32 + 2) * CELL);
    let px = |x: i32| (x - lo + 1) * CELL;
    let py = |s: i32| h - (s + 1) * CELL;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    if !c.entries.is_empty() {
        for x in lo..=hi {
            writeln!(
                out,
                r#"<line x1="{0}" y1="0" x2="{0}" y2="{h}" stroke="lightgray"/>"#,
                px(x)
            )
            .unwrap();
        }
        for s in 0..=top as i32 {
            writeln!(
                out,
                r#"<line x1="0" y1="{0}" x2="{w}" y2="{0}" stroke="lightgray"/>"#,
                py(s)
            )
            .unwrap();
        }
    }
    for (&(s, t), &n) in &c.entries {
        let (x, y) = (px(t - s as i32), py(s as i32));
        for k in 0..n as i32 {
            // several classes in one bidegree sit side by side
            let dx = (2 * k - (n as i32 - 1)) * 4;
            writeln!(out, r#"<circle cx="{}" cy="{y}" r="3"/>"#, x + dx).unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(n: usize) -> ExtChart {
        let mut c = ExtChart::new(n, n as i32);
        for s in 0..=n {
            c.entries.insert((s, s as i32), 1);
        }
        c
    }

    #[test]
    fn empty_chart() {
        let c = ExtChart::new(3, 10);
        assert_eq!(render_chart(&c, ChartFormat::Csv), "s,t,dim\n");
        assert_eq!(render_chart(&c, ChartFormat::Ascii), "");
        assert!(!render_chart(&c, ChartFormat::Svg).contains("<circle"));
    }

    #[test]
    fn vertical_tower() {
        let c = tower(3);
        let a = render_chart(&c, ChartFormat::Ascii);
        let rows: Vec<&str> = a.lines().take(4).collect();
        assert_eq!(rows, vec!["  3 | 1", "  2 | 1", "  1 | 1", "  0 | 1"]);
        let s = render_chart(&c, ChartFormat::Svg);
        assert_eq!(s.matches(r#"cx="20""#).count(), 4);
        assert_eq!(
            render_chart(&c, ChartFormat::Csv),
            "s,t,dim\n0,0,1\n1,1,1\n2,2,1\n3,3,1\n"
        );
        assert_eq!(
            render_chart(&c, ChartFormat::Svg),
            render_chart(&c, ChartFormat::Svg)
        );
    }
}
