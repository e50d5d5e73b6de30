use std::fmt::Write;

use super::{bands, fmt_points, normalized_label, row_points};
use crate::grading::{Cell, GradeValue, Scorecard};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Glyphs {
    Unicode,
    Ascii,
}

impl Glyphs {
    fn cell(self, cell: &Cell) -> char {
        if cell.pending {
            return '?';
        }
        match (self, cell.grade) {
            (Glyphs::Unicode, GradeValue::Satisfied) => '■',
            (Glyphs::Unicode, GradeValue::Partial) => '◩',
            (Glyphs::Unicode, GradeValue::NotSatisfied) => '□',
            (Glyphs::Unicode, GradeValue::NotApplicable) => '·',
            (Glyphs::Ascii, GradeValue::Satisfied) => 'S',
            (Glyphs::Ascii, GradeValue::Partial) => 'P',
            (Glyphs::Ascii, GradeValue::NotSatisfied) => 'N',
            (Glyphs::Ascii, GradeValue::NotApplicable) => '.',
        }
    }
}

/// Terminal table: one line per row, one glyph per criterion.
pub fn render_text(card: &Scorecard, glyphs: Glyphs) -> String {
    let bands = bands(card);
    let label_w = card.rows.iter().map(|r| r.label.chars().count()).max().unwrap_or(0).max(6);
    let mut s = String::new();
    if card.provisional {
        let _ = writeln!(s, "PROVISIONAL: {} judgments pending", card.pending);
    }
    if card.evaluation_count() == 0 {
        let _ = writeln!(s, "warning: the report contains no evaluations");
    }

    let mut header = format!("{:label_w$}", "");
    for (cat, n) in &bands {
        let _ = write!(header, " {:<n$}", cat);
    }
    let _ = writeln!(s, "{}", header.trim_end());

    for row in &card.rows {
        let mut line = format!("{:label_w$}", row.label);
        let mut cells = row.cells.iter();
        for (_, n) in &bands {
            line.push(' ');
            for cell in cells.by_ref().take(*n) {
                line.push(glyphs.cell(cell));
            }
        }
        let _ = writeln!(line, "  {}", row_points(row));
        s.push_str(&line);
    }
    let _ = writeln!(s, "total {}/{} = {}", fmt_points(card.points), card.applicable, normalized_label(card));
    let legend = match glyphs {
        Glyphs::Unicode => "■ satisfied  ◩ partial  □ not satisfied  · not applicable  ? pending",
        Glyphs::Ascii => "S satisfied  P partial  N not satisfied  . not applicable  ? pending",
    };
    let _ = writeln!(s, "{legend}");
    s
}
