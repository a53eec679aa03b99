//! CSV and JSON writers for orbits, sections and chaos reports.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use super::{ChaosReport, OrbitRecord, Section};
use crate::error::Result;

fn phase_header(dof: usize) -> Vec<String> {
    let q = (1..=dof).map(|i| format!("q{i}"));
    let p = (1..=dof).map(|i| format!("p{i}"));
    q.chain(p).collect()
}

/// Columns `t, q1..qn, p1..pn, E`.
pub fn write_orbit_csv(orbit: &OrbitRecord, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["t".to_string()];
    header.extend(phase_header(orbit.dof()));
    header.push("E".into());
    w.write_record(&header)?;
    for ((t, z), e) in orbit.times.iter().zip(&orbit.points).zip(&orbit.energies) {
        let mut row = vec![format!("{t:.17e}")];
        row.extend(z.iter().map(|x| format!("{x:.17e}")));
        row.push(format!("{e:.17e}"));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `t, q1..qn, p1..pn` at each crossing.
pub fn write_section_csv(section: &Section, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let dof = section.crossings.first().map_or(0, |c| c.z.len() / 2);
    let mut header = vec!["t".to_string()];
    header.extend(phase_header(dof));
    w.write_record(&header)?;
    for c in &section.crossings {
        let mut row = vec![format!("{:.17e}", c.t)];
        row.extend(c.z.iter().map(|x| format!("{x:.17e}")));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_chaos_report(report: &ChaosReport, path: &Path) -> Result<()> {
    let w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(w, report)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::tests::Harmonic;
    use crate::orbits::{integrate, IntegrateOptions};

    #[test]
    fn orbit_csv_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("orbit.csv");
        let rec = integrate(&Harmonic(vec![1.0, 1.0]), &[0.1, 0.2, 0.0, 0.0], 1.0, &IntegrateOptions::default()).unwrap();
        write_orbit_csv(&rec, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("t,q1,q2,p1,p2,E\n"));
        assert_eq!(text.lines().count(), rec.times.len() + 1);
    }
}
