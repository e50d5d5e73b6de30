use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{bands, fmt_points, normalized_label, row_points};
use crate::grading::{Cell, GradeValue, Scorecard};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theme {
    pub satisfied: String,
    pub partial: String,
    pub not_satisfied: String,
    pub not_applicable: String,
    pub pending: String,
    pub text: String,
    pub background: String,
    pub font: String,
}

impl Default for Theme {
    fn default() -> Self {
        Theme {
            satisfied: "#2e7d32".into(),
            partial: "#f9a825".into(),
            not_satisfied: "#c62828".into(),
            not_applicable: "#bdbdbd".into(),
            pending: "#90a4ae".into(),
            text: "#212121".into(),
            background: "#ffffff".into(),
            font: "DejaVu Sans, Arial, sans-serif".into(),
        }
    }
}

impl Theme {
    fn fill(&self, cell: &Cell) -> &str {
        if cell.pending {
            return &self.pending;
        }
        match cell.grade {
            GradeValue::Satisfied => &self.satisfied,
            GradeValue::Partial => &self.partial,
            GradeValue::NotSatisfied => &self.not_satisfied,
            GradeValue::NotApplicable => &self.not_applicable,
        }
    }
}

const CELL: usize = 18;
const STEP: usize = CELL + 2;
const BAND_GAP: usize = 8;
const MARGIN: usize = 16;
const HEADER: usize = 92;
const TOTAL_W: usize = 80;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Heatmap of rows by criteria, grouped into category bands.
///
/// Output is a pure function of the scorecard and theme, so it can be diffed
/// against a golden file.
pub fn render_svg(card: &Scorecard, theme: &Theme) -> String {
    let label_w = card.rows.iter().map(|r| r.label.chars().count()).max().unwrap_or(0).max(8) * 7 + 12;
    let bands = bands(card);

    // x offset of every column, with a gap between bands.
    let mut xs = Vec::with_capacity(card.columns.len());
    let mut x = MARGIN + label_w;
    for (i, (_, n)) in bands.iter().enumerate() {
        if i > 0 {
            x += BAND_GAP;
        }
        for _ in 0..*n {
            xs.push(x);
            x += STEP;
        }
    }
    let grid_right = x;
    let banner = if card.provisional { 28 } else { 0 };
    let warning = if card.evaluation_count() == 0 { 20 } else { 0 };
    let top = MARGIN + banner + warning + HEADER;
    let grid_bottom = top + card.rows.len() * STEP;
    let width = grid_right + TOTAL_W + MARGIN;
    let height = grid_bottom + 70;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="{}" font-size="11">"#,
        escape(&theme.font)
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="{}"/>"#, theme.background);

    let mut y = MARGIN;
    if card.provisional {
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{y}" width="{}" height="22" fill="{}"/>"#,
            width - 2 * MARGIN,
            theme.pending
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-weight="bold" fill="{}">PROVISIONAL: {} judgments pending</text>"#,
            MARGIN + 6,
            y + 15,
            theme.text,
            card.pending
        );
        y += banner;
    }
    if card.evaluation_count() == 0 {
        let _ = writeln!(
            s,
            r#"<text x="{MARGIN}" y="{}" fill="{}">Warning: the report contains no evaluations</text>"#,
            y + 12,
            theme.not_satisfied
        );
        y += warning;
    }

    // Category bands and criterion labels.
    let mut col = 0;
    for (cat, n) in &bands {
        let x0 = xs[col];
        let x1 = xs[col + n - 1] + CELL;
        let _ = writeln!(s, r#"<rect x="{x0}" y="{}" width="{}" height="16" fill="{}"/>"#, y + 2, x1 - x0, theme.not_applicable);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-weight="bold" fill="{}">{cat}</text>"#,
            (x0 + x1) / 2,
            y + 14,
            theme.text
        );
        col += n;
    }
    for (c, column) in card.columns.iter().enumerate() {
        let cx = xs[c] + CELL / 2 + 4;
        let cy = y + HEADER - 6;
        let _ = writeln!(
            s,
            r#"<text x="{cx}" y="{cy}" transform="rotate(-90 {cx} {cy})" fill="{}">{}</text>"#,
            theme.text,
            escape(&column.criterion)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end" font-weight="bold" fill="{}">points</text>"#,
        grid_right + TOTAL_W,
        y + HEADER - 6,
        theme.text
    );

    for (r, row) in card.rows.iter().enumerate() {
        let ry = top + r * STEP;
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}" fill="{}">{}</text>"#, ry + 13, theme.text, escape(&row.label));
        for (c, cell) in row.cells.iter().enumerate() {
            let title = if cell.rationale.is_empty() {
                format!("{}: {}", card.columns[c].criterion, cell.grade)
            } else {
                format!("{}: {} ({})", card.columns[c].criterion, cell.grade, cell.rationale)
            };
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{ry}" width="{CELL}" height="{CELL}" fill="{}"><title>{}</title></rect>"#,
                xs[c],
                theme.fill(cell),
                escape(&title)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end" fill="{}">{}</text>"#,
            grid_right + TOTAL_W,
            ry + 13,
            theme.text,
            row_points(row)
        );
    }

    let fy = grid_bottom + 18;
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{fy}" font-weight="bold" fill="{}">Total {}/{}</text>"#,
        theme.text,
        fmt_points(card.points),
        card.applicable
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{fy}" text-anchor="end" font-weight="bold" fill="{}">{}</text>"#,
        grid_right + TOTAL_W,
        theme.text,
        normalized_label(card)
    );

    let legend = [
        ("satisfied", &theme.satisfied),
        ("partial", &theme.partial),
        ("not satisfied", &theme.not_satisfied),
        ("not applicable", &theme.not_applicable),
        ("pending", &theme.pending),
    ];
    let ly = fy + 16;
    let mut lx = MARGIN;
    for (name, color) in legend {
        let _ = writeln!(s, r#"<rect x="{lx}" y="{ly}" width="12" height="12" fill="{color}"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="{}" fill="{}">{name}</text>"#, lx + 16, ly + 10, theme.text);
        lx += 16 + name.len() * 7 + 14;
    }
    s.push_str("</svg>\n");
    s
}
