//! Static SVG renderings of the sweep CSVs. No external renderer: the
//! output is a vertical stack of line panels, one series per initial
//! condition (solid = quantum, dashed = classical), with the predicted
//! crossover as a dashed vertical marker.

use std::path::Path;

use crate::HarnessError;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

const PANEL_W: f64 = 640.0;
const PANEL_H: f64 = 300.0;
const MARGIN_LEFT: f64 = 74.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 48.0;

struct Series {
    label: String,
    color: String,
    dashed: bool,
    points: Vec<(f64, f64)>,
}

struct Panel {
    title: String,
    x_label: String,
    y_label: String,
    log_x: bool,
    vline: Option<f64>,
    series: Vec<Series>,
}

struct Table {
    headers: Vec<String>,
    rows: Vec<(u64, Vec<String>)>,
}

fn read_table(path: &Path) -> Result<Table, HarnessError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
    let headers = reader
        .headers()
        .map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    if rows.is_empty() {
        return Err(HarnessError::EmptyData {
            path: path.to_path_buf(),
        });
    }
    Ok(Table { headers, rows })
}

fn parse_field(path: &Path, line: u64, name: &str, text: &str) -> Result<f64, HarnessError> {
    text.parse::<f64>().map_err(|e| HarnessError::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("column `{name}`: {e}"),
    })
}

/// Render a sweep CSV produced by this crate into an SVG file.
///
/// The schema is recognized from the header row (fig5, fig6, or fig7
/// layout); anything else is a parse error. Nothing is written when the
/// input has no data rows.
pub fn emit_plot(csv: &Path, out: &Path) -> Result<(), HarnessError> {
    let table = read_table(csv)?;
    let headers: Vec<&str> = table.headers.iter().map(String::as_str).collect();
    let n_ics = headers
        .iter()
        .filter(|h| h.starts_with("q_u0_ic"))
        .count();
    if n_ics == 0 {
        return Err(HarnessError::Parse {
            path: csv.to_path_buf(),
            line: 1,
            message: "no per-initial-condition columns found".into(),
        });
    }

    let panels = match (headers.first(), headers.get(1)) {
        (Some(&"timesteps"), Some(&"c")) => depth_panels(csv, &table, n_ics)?,
        (Some(&"c"), Some(&"dx")) => spacing_panels(csv, &table, n_ics)?,
        (Some(&"c"), _) => speed_panels(csv, &table, n_ics)?,
        _ => {
            return Err(HarnessError::Parse {
                path: csv.to_path_buf(),
                line: 1,
                message: format!("unrecognized sweep schema: {}", table.headers.join(",")),
            })
        }
    };

    let svg = render(&panels);
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| HarnessError::io(parent, e))?;
        }
    }
    std::fs::write(out, svg).map_err(|e| HarnessError::io(out, e))
}

/// Column offset of the per-initial-condition block after `fixed` leading
/// columns: [q_u0, q_u1, cl_u0, cl_u1] per condition.
fn ic_col(fixed: usize, ic: usize, field: usize) -> usize {
    fixed + 4 * ic + field
}

fn ic_label(headers: &[String], fixed: usize, ic: usize) -> String {
    headers
        .get(ic_col(fixed, ic, 0))
        .map(|h| h.replace("q_u0_", ""))
        .unwrap_or_else(|| format!("ic{}", ic + 1))
}

type BlockKey = String;

/// Group rows into panels: one (block, output) panel with quantum solid and
/// classical dashed per initial condition.
#[allow(clippy::too_many_arguments)]
fn build_panels(
    csv: &Path,
    table: &Table,
    n_ics: usize,
    fixed: usize,
    x_col: usize,
    x_name: &str,
    log_x: bool,
    block_of: impl Fn(&[String]) -> BlockKey,
    block_title: impl Fn(&BlockKey) -> String,
    vline_col: Option<usize>,
) -> Result<Vec<Panel>, HarnessError> {
    let mut block_order: Vec<BlockKey> = Vec::new();
    for (_, row) in &table.rows {
        let key = block_of(row);
        if !block_order.contains(&key) {
            block_order.push(key);
        }
    }

    let mut panels = Vec::new();
    for key in &block_order {
        for (field, output) in [(0usize, "u0"), (1usize, "u1")] {
            let mut series: Vec<Series> = Vec::new();
            for ic in 0..n_ics {
                let color = PALETTE[ic % PALETTE.len()].to_string();
                let label = ic_label(&table.headers, fixed, ic);
                series.push(Series {
                    label: format!("quantum {label}"),
                    color: color.clone(),
                    dashed: false,
                    points: Vec::new(),
                });
                series.push(Series {
                    label: format!("classical {label}"),
                    color,
                    dashed: true,
                    points: Vec::new(),
                });
            }
            let mut vline = None;
            for (line, row) in &table.rows {
                if &block_of(row) != key {
                    continue;
                }
                let x = parse_field(csv, *line, x_name, &row[x_col])?;
                for ic in 0..n_ics {
                    let q = parse_field(
                        csv,
                        *line,
                        &table.headers[ic_col(fixed, ic, field)],
                        &row[ic_col(fixed, ic, field)],
                    )?;
                    let cl = parse_field(
                        csv,
                        *line,
                        &table.headers[ic_col(fixed, ic, field + 2)],
                        &row[ic_col(fixed, ic, field + 2)],
                    )?;
                    series[2 * ic].points.push((x, q));
                    series[2 * ic + 1].points.push((x, cl));
                }
                if let Some(col) = vline_col {
                    let text = row[col].trim();
                    if !text.is_empty() {
                        vline = Some(parse_field(csv, *line, &table.headers[col], text)?);
                    }
                }
            }
            panels.push(Panel {
                title: format!("{}{output} (solid quantum, dashed classical)", block_title(key)),
                x_label: x_name.to_string(),
                y_label: format!("{output} value"),
                log_x,
                vline,
                series,
            });
        }
    }
    Ok(panels)
}

fn speed_panels(csv: &Path, table: &Table, n_ics: usize) -> Result<Vec<Panel>, HarnessError> {
    let vline_col = table.headers.iter().position(|h| h == "crossover_c");
    build_panels(
        csv,
        table,
        n_ics,
        1,
        0,
        "advection speed c",
        true,
        |_| String::new(),
        |_| String::new(),
        vline_col,
    )
}

fn spacing_panels(csv: &Path, table: &Table, n_ics: usize) -> Result<Vec<Panel>, HarnessError> {
    let vline_col = table.headers.iter().position(|h| h == "crossover_dx");
    build_panels(
        csv,
        table,
        n_ics,
        2,
        1,
        "particle spacing dx",
        false,
        |row| row[0].clone(),
        |key| format!("c = {}: ", compact_number(key)),
        vline_col,
    )
}

fn depth_panels(csv: &Path, table: &Table, n_ics: usize) -> Result<Vec<Panel>, HarnessError> {
    let vline_col = table.headers.iter().position(|h| h == "crossover_c");
    build_panels(
        csv,
        table,
        n_ics,
        2,
        1,
        "advection speed c",
        true,
        |row| row[0].clone(),
        |key| format!("t = {key}: "),
        vline_col,
    )
}

/// Shorten a full-precision CSV number for a panel title.
fn compact_number(text: &str) -> String {
    text.parse::<f64>()
        .map(|v| format!("{v}"))
        .unwrap_or_else(|_| text.to_string())
}

fn fmt_tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e3).contains(&a) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn render(panels: &[Panel]) -> String {
    let total_h = PANEL_H * panels.len() as f64;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{PANEL_W}\" height=\"{total_h}\" \
         viewBox=\"0 0 {PANEL_W} {total_h}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (i, panel) in panels.iter().enumerate() {
        render_panel(&mut svg, panel, i as f64 * PANEL_H);
    }
    svg.push_str("</svg>\n");
    svg
}

fn render_panel(svg: &mut String, panel: &Panel, y_off: f64) {
    let x0 = MARGIN_LEFT;
    let x1 = PANEL_W - MARGIN_RIGHT;
    let y0 = y_off + MARGIN_TOP;
    let y1 = y_off + PANEL_H - MARGIN_BOTTOM;

    let xs: Vec<f64> = panel
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let ys: Vec<f64> = panel
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .collect();
    let (x_min, x_max) = bounds(&xs);
    let (mut y_min, mut y_max) = bounds(&ys);
    let pad = 0.05 * (y_max - y_min).max(1e-9);
    y_min -= pad;
    y_max += pad;

    let to_x = |x: f64| -> f64 {
        let t = if panel.log_x {
            (x.ln() - x_min.ln()) / (x_max.ln() - x_min.ln())
        } else {
            (x - x_min) / (x_max - x_min)
        };
        x0 + t * (x1 - x0)
    };
    let to_y = |y: f64| -> f64 { y1 - (y - y_min) / (y_max - y_min) * (y1 - y0) };

    // frame and title
    svg.push_str(&format!(
        "<rect x=\"{x0}\" y=\"{y0}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
        x1 - x0,
        y1 - y0
    ));
    svg.push_str(&format!(
        "<text x=\"{x0}\" y=\"{}\" font-size=\"13\" fill=\"#111\">{}</text>\n",
        y0 - 10.0,
        panel.title
    ));

    // ticks
    for tick in ticks(x_min, x_max, panel.log_x) {
        let px = to_x(tick);
        svg.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{y1}\" x2=\"{px}\" y2=\"{}\" stroke=\"#444\"/>\n",
            y1 + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{px}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\" fill=\"#333\">{}</text>\n",
            y1 + 18.0,
            fmt_tick(tick)
        ));
    }
    for tick in ticks(y_min, y_max, false) {
        let py = to_y(tick);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{py}\" x2=\"{x0}\" y2=\"{py}\" stroke=\"#444\"/>\n",
            x0 - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\" fill=\"#333\">{}</text>\n",
            x0 - 8.0,
            py + 3.5,
            fmt_tick(tick)
        ));
    }

    // axis labels
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\" fill=\"#111\">{}</text>\n",
        (x0 + x1) / 2.0,
        y1 + 36.0,
        panel.x_label
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\" fill=\"#111\" \
         transform=\"rotate(-90 16 {})\">{}</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        panel.y_label
    ));

    // crossover marker
    if let Some(v) = panel.vline {
        if v > x_min && v < x_max {
            let px = to_x(v);
            svg.push_str(&format!(
                "<line x1=\"{px}\" y1=\"{y0}\" x2=\"{px}\" y2=\"{y1}\" stroke=\"#888\" \
                 stroke-dasharray=\"6 4\"/>\n"
            ));
        }
    }

    // series
    for series in &panel.series {
        if series.points.is_empty() {
            continue;
        }
        let path: Vec<String> = series
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", to_x(x), to_y(y)))
            .collect();
        let dash = if series.dashed {
            " stroke-dasharray=\"3 3\" opacity=\"0.7\""
        } else {
            ""
        };
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.4\"{dash} points=\"{}\"/>\n",
            series.color,
            path.join(" ")
        ));
    }

    // legend: quantum entries only, classical is the dashed twin
    let mut ly = y0 + 14.0;
    for series in panel.series.iter().filter(|s| !s.dashed) {
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            x0 + 8.0,
            ly - 3.0,
            x0 + 26.0,
            ly - 3.0,
            series.color
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#333\">{}</text>\n",
            x0 + 30.0,
            ly,
            series.label
        ));
        ly += 13.0;
    }
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if !min.is_finite() || !max.is_finite() {
        (0.0, 1.0)
    } else if min == max {
        (min - 1.0, max + 1.0)
    } else {
        (min, max)
    }
}

fn ticks(min: f64, max: f64, log: bool) -> Vec<f64> {
    if log {
        let lo = min.log10().ceil() as i32;
        let hi = max.log10().floor() as i32;
        let mut out: Vec<f64> = (lo..=hi).map(|d| 10f64.powi(d)).collect();
        if out.len() > 8 {
            let step = out.len().div_ceil(8);
            out = out.into_iter().step_by(step).collect();
        }
        if out.is_empty() {
            out = vec![min, max];
        }
        out
    } else {
        (0..=4)
            .map(|i| min + (max - min) * i as f64 / 4.0)
            .collect()
    }
}
