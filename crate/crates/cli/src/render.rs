//! Human-readable reports. JSON output goes through `ClosureReport::to_json`.

use std::fmt::Write as _;

use zclosure::closure::{ideal_strings, ClosureReport};
use zclosure::multipoly::{Ideal, PolyError};
use zclosure::toric::ToricData;

/// For 2×2 inputs the entries are written `[[x, w], [z, y]]`.
const LETTERS: [(&str, &str); 4] = [("x_1_1", "x"), ("x_1_2", "w"), ("x_2_1", "z"), ("x_2_2", "y")];

pub struct Style {
    letters: bool,
}

impl Style {
    pub fn for_size(n: usize) -> Self {
        Style { letters: n == 2 }
    }

    pub fn plain() -> Self {
        Style { letters: false }
    }

    fn poly(&self, s: &str) -> String {
        if !self.letters {
            return s.to_string();
        }
        LETTERS.iter().fold(s.to_string(), |acc, (from, to)| acc.replace(from, to))
    }

    fn ideal(&self, out: &mut String, ideal: &Ideal, indent: &str) -> Result<(), PolyError> {
        let gens = ideal_strings(ideal)?;
        if gens.is_empty() {
            let _ = writeln!(out, "{indent}0");
        }
        for g in gens {
            let _ = writeln!(out, "{indent}{} = 0", self.poly(&g));
        }
        Ok(())
    }
}

pub fn toric_text(t: &ToricData, style: &Style, out: &mut String) -> Result<(), PolyError> {
    let points: Vec<String> =
        t.points.iter().map(|p| format!("({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))).collect();
    let _ = writeln!(out, "toric points: {}", points.join(" "));
    let _ = writeln!(out, "toric dimension: {}", t.dimension);
    let _ = writeln!(out, "toric ideal in {}:", style.poly(&t.ideal.ring().vars().join(", ")));
    style.ideal(out, &t.ideal, "  ")
}

pub fn report_text(r: &ClosureReport, title: &str) -> Result<String, PolyError> {
    let style = Style::for_size(r.n);
    let mut out = String::new();
    let _ = writeln!(out, "{title} ({} mode, {} coordinates)", r.mode, r.coords);
    if style.letters {
        let _ = writeln!(out, "variables: [[x, w], [z, y]]");
    }
    if let Some(m) = &r.matrix {
        let _ = writeln!(out, "matrix: {m}");
    }
    let blocks: Vec<String> = r.eigenvalues.iter().zip(&r.block_sizes).map(|(e, s)| format!("{e} (block size {s})")).collect();
    let _ = writeln!(out, "eigenvalues: {}", blocks.join(", "));
    let _ = writeln!(out, "nu: {}", r.nu);
    let _ = writeln!(out, "rank: {}", r.rank_g);
    let _ = writeln!(out, "torsion: {}", r.torsion_order);
    let _ = writeln!(out, "dimension: {}", r.dimension);
    let _ = writeln!(out, "components: {}", r.num_components);
    let _ = writeln!(out, "isolated points: {}", r.isolated_points.len());
    for p in &r.isolated_points {
        let _ = writeln!(out, "  {p}");
    }
    let _ = writeln!(out, "ideal:");
    style.ideal(&mut out, &r.ideal, "  ")?;
    match &r.component_ideals {
        Some(cs) => {
            for (i, c) in cs.iter().enumerate() {
                let _ = writeln!(out, "component {}:", i + 1);
                style.ideal(&mut out, c, "  ")?;
            }
        }
        None => {
            let _ = writeln!(out, "component ideals: not defined over the rationals");
        }
    }
    if let Some(t) = &r.toric {
        toric_text(t, &style, &mut out)?;
    }
    Ok(out)
}
