use std::io::{self, Write};

use crate::Vector;

/// Recorded samples of a closed-loop run; all lists have equal length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vector>,
    pub outputs: Vec<Vector>,
    /// Action in force from each sample time on.
    pub actions: Vec<Vector>,
    pub storage: Option<Vec<f64>>,
}

impl Trajectory {
    pub(crate) fn with_capacity(cap: usize, with_storage: bool) -> Self {
        Self {
            times: Vec::with_capacity(cap),
            states: Vec::with_capacity(cap),
            outputs: Vec::with_capacity(cap),
            actions: Vec::with_capacity(cap),
            storage: with_storage.then(|| Vec::with_capacity(cap)),
        }
    }

    pub(crate) fn push(&mut self, t: f64, x: &Vector, y: Vector, u: &Vector, h: Option<f64>) {
        self.times.push(t);
        self.states.push(x.clone());
        self.outputs.push(y);
        self.actions.push(u.clone());
        if let (Some(s), Some(h)) = (self.storage.as_mut(), h) {
            s.push(h);
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of consecutive samples whose action differs.
    pub fn action_switches(&self) -> usize {
        self.actions.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// `t,x1..xn,y1..ym,u1..um[,H]`, one row per sample, shortest
    /// round-trip decimal formatting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let (n, m, p) = match (self.states.first(), self.outputs.first(), self.actions.first()) {
            (Some(x), Some(y), Some(u)) => (x.len(), y.len(), u.len()),
            _ => (0, 0, 0),
        };
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.extend((1..=m).map(|i| format!("y{i}")));
        header.extend((1..=p).map(|i| format!("u{i}")));
        if self.storage.is_some() {
            header.push("H".into());
        }
        writeln!(w, "{}", header.join(","))?;
        let mut row = String::new();
        for k in 0..self.len() {
            row.clear();
            row.push_str(&self.times[k].to_string());
            for v in self.states[k].iter().chain(self.outputs[k].iter()).chain(self.actions[k].iter()) {
                row.push(',');
                row.push_str(&v.to_string());
            }
            if let Some(h) = &self.storage {
                row.push(',');
                row.push_str(&h[k].to_string());
            }
            writeln!(w, "{row}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Trajectory::with_capacity(2, true);
        let x = Vector::from_column_slice(&[1.0, 0.1, -2.0]);
        t.push(0.0, &x, Vector::from_column_slice(&[1.0, -8.0]), &Vector::zeros(2), Some(4.5));
        t.push(0.5, &x, Vector::from_column_slice(&[1.0, -8.0]), &Vector::from_column_slice(&[0.0, 0.1]), Some(4.25));
        let csv = t.to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x1,x2,x3,y1,y2,u1,u2,H");
        assert_eq!(lines[1], "0,1,0.1,-2,1,-8,0,0,4.5");
        assert_eq!(lines[2], "0.5,1,0.1,-2,1,-8,0,0.1,4.25");
        assert_eq!(t.action_switches(), 1);
    }

    #[test]
    fn csv_without_storage() {
        let mut t = Trajectory::with_capacity(1, false);
        t.push(0.0, &Vector::zeros(1), Vector::zeros(1), &Vector::zeros(1), None);
        assert_eq!(t.to_csv_string().lines().next(), Some("t,x1,y1,u1"));
    }
}
