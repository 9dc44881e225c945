//! Discrete datasets: `N` rows of 0-based state indices over `n` variables.

use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    names: Vec<String>,
    num_states: Vec<usize>,
    /// Optional per-variable state labels, used when writing CSV.
    state_names: Option<Vec<Vec<String>>>,
    /// Row-major `rows × n` cells.
    cells: Vec<u32>,
}

impl Dataset {
    pub fn new(names: Vec<String>, num_states: Vec<usize>, rows: &[Vec<usize>]) -> Result<Self> {
        let mut ds = Self::empty(names, num_states)?;
        for row in rows {
            ds.push_row(row)?;
        }
        Ok(ds)
    }

    pub fn empty(names: Vec<String>, num_states: Vec<usize>) -> Result<Self> {
        if names.len() != num_states.len() {
            return Err(Error::LengthMismatch {
                expected: names.len(),
                actual: num_states.len(),
            });
        }
        if let Some(i) = num_states.iter().position(|&r| r < 2) {
            return Err(Error::StateCountMismatch(format!(
                "variable {} has {} states, need at least 2",
                names[i], num_states[i]
            )));
        }
        Ok(Self {
            names,
            num_states,
            state_names: None,
            cells: Vec::new(),
        })
    }

    pub fn with_state_names(mut self, state_names: Vec<Vec<String>>) -> Result<Self> {
        if state_names.len() != self.n_vars() {
            return Err(Error::LengthMismatch {
                expected: self.n_vars(),
                actual: state_names.len(),
            });
        }
        for (i, s) in state_names.iter().enumerate() {
            if s.len() != self.num_states[i] {
                return Err(Error::StateCountMismatch(format!(
                    "variable {} has {} states but {} labels",
                    self.names[i],
                    self.num_states[i],
                    s.len()
                )));
            }
        }
        self.state_names = Some(state_names);
        Ok(self)
    }

    pub fn push_row(&mut self, row: &[usize]) -> Result<()> {
        if row.len() != self.n_vars() {
            return Err(Error::LengthMismatch {
                expected: self.n_vars(),
                actual: row.len(),
            });
        }
        for (i, &s) in row.iter().enumerate() {
            if s >= self.num_states[i] {
                return Err(Error::InvalidState {
                    variable: i,
                    state: s,
                    states: self.num_states[i],
                });
            }
        }
        self.cells.extend(row.iter().map(|&s| s as u32));
        Ok(())
    }

    /// Appends `copies` identical rows; the row must already be validated.
    pub(crate) fn push_repeated(&mut self, row: &[usize], copies: usize) {
        debug_assert_eq!(row.len(), self.n_vars());
        self.cells.reserve(row.len() * copies);
        for _ in 0..copies {
            self.cells.extend(row.iter().map(|&s| s as u32));
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_states(&self) -> &[usize] {
        &self.num_states
    }

    pub fn n_vars(&self) -> usize {
        self.num_states.len()
    }

    pub fn n_rows(&self) -> usize {
        if self.n_vars() == 0 {
            0
        } else {
            self.cells.len() / self.n_vars()
        }
    }

    #[inline]
    pub fn row(&self, index: usize) -> &[u32] {
        let n = self.n_vars();
        &self.cells[index * n..(index + 1) * n]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u32]> {
        // chunks_exact panics on zero; an empty header has no rows anyway
        self.cells.chunks_exact(self.n_vars().max(1))
    }

    /// Column slice preserving row order. `indices` must be strictly increasing.
    pub fn project(&self, indices: &[usize]) -> Result<Dataset> {
        for (pos, &i) in indices.iter().enumerate() {
            if i >= self.n_vars() {
                return Err(Error::InvalidIndex {
                    index: i,
                    n: self.n_vars(),
                });
            }
            if pos > 0 && indices[pos - 1] >= i {
                return Err(Error::InvalidParameter(format!(
                    "projection indices must be strictly increasing: {indices:?}"
                )));
            }
        }
        let mut cells = Vec::with_capacity(self.n_rows() * indices.len());
        for row in self.rows() {
            cells.extend(indices.iter().map(|&i| row[i]));
        }
        Ok(Dataset {
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            num_states: indices.iter().map(|&i| self.num_states[i]).collect(),
            state_names: self
                .state_names
                .as_ref()
                .map(|s| indices.iter().map(|&i| s[i].clone()).collect()),
            cells,
        })
    }

    /// Writes a header of variable names, then one row per example. Cells
    /// carry state labels when known, 0-based indices otherwise.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.names)?;
        let mut record = Vec::with_capacity(self.n_vars());
        for row in self.rows() {
            record.clear();
            for (i, &s) in row.iter().enumerate() {
                match &self.state_names {
                    Some(labels) => record.push(labels[i][s as usize].clone()),
                    None => record.push(s.to_string()),
                }
            }
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a CSV whose columns are named `names` (any order) and whose cells
    /// are either state labels from `state_names` or 0-based indices.
    pub fn read_csv_with_schema<R: Read>(reader: R, names: &[String], state_names: &[Vec<String>]) -> Result<Dataset> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        if header.len() != names.len() {
            return Err(Error::LengthMismatch {
                expected: names.len(),
                actual: header.len(),
            });
        }
        // column_of[i] = CSV column holding variable i
        let column_of = names
            .iter()
            .map(|name| {
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::Parse(format!("dataset lacks column {name:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let num_states: Vec<usize> = state_names.iter().map(Vec::len).collect();
        let mut ds = Dataset::empty(names.to_vec(), num_states)?.with_state_names(state_names.to_vec())?;
        let mut row = vec![0usize; names.len()];
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            for (i, &col) in column_of.iter().enumerate() {
                let cell = record.get(col).unwrap_or("");
                row[i] = match state_names[i].iter().position(|s| s == cell) {
                    Some(k) => k,
                    None => cell.parse::<usize>().map_err(|_| {
                        Error::Parse(format!("row {}: {cell:?} is not a state of {}", line + 1, names[i]))
                    })?,
                };
            }
            ds.push_row(&row)?;
        }
        Ok(ds)
    }

    /// Reads an integer-coded CSV without a schema. State counts are inferred
    /// as `max(2, largest index + 1)`, so states absent from the data are lost.
    pub fn read_csv_indices<R: Read>(reader: R) -> Result<Dataset> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let names: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        let mut max_state = vec![1usize; names.len()];
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .map(|c| {
                    c.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("row {}: {c:?} is not a state index", line + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != names.len() {
                return Err(Error::LengthMismatch {
                    expected: names.len(),
                    actual: row.len(),
                });
            }
            for (m, &s) in max_state.iter_mut().zip(&row) {
                *m = (*m).max(s + 1);
            }
            rows.push(row);
        }
        Dataset::new(names, max_state, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn rejects_out_of_range_cells() {
        let err = Dataset::new(names(2), vec![2, 3], &[vec![0, 3]]).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidState {
                variable: 1,
                state: 3,
                ..
            }
        ));
    }

    #[test]
    fn projection_slices_columns() {
        let ds = Dataset::new(names(3), vec![2, 2, 2], &[vec![0, 1, 0], vec![1, 0, 1]]).unwrap();
        let p = ds.project(&[0, 2]).unwrap();
        assert_eq!(p.n_rows(), 2);
        assert_eq!(p.row(0), &[0, 0]);
        assert_eq!(p.row(1), &[1, 1]);
        assert_eq!(p.names(), &["v0".to_string(), "v2".to_string()]);
        assert_eq!(ds.project(&[0, 1, 2]).unwrap(), ds);
        assert!(ds.project(&[2, 0]).is_err());
        assert!(ds.project(&[3]).is_err());
    }

    #[test]
    fn csv_accepts_labels_and_indices() {
        let labels = vec![
            vec!["lo".to_string(), "hi".to_string()],
            vec!["a".to_string(), "b".to_string(), "c".to_string()],
        ];
        let names = vec!["X".to_string(), "Y".to_string()];
        let text = "Y,X\nc,hi\n0,lo\nb,1\n";
        let ds = Dataset::read_csv_with_schema(text.as_bytes(), &names, &labels).unwrap();
        assert_eq!(ds.n_rows(), 3);
        assert_eq!(ds.row(0), &[1, 2]);
        assert_eq!(ds.row(1), &[0, 0]);
        assert_eq!(ds.row(2), &[1, 1]);

        let mut out = Vec::new();
        ds.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "X,Y\nhi,c\nlo,a\nhi,b\n");
    }

    #[test]
    fn csv_indices_only() {
        let ds = Dataset::read_csv_indices("A,B\n0,2\n1,0\n".as_bytes()).unwrap();
        assert_eq!(ds.num_states(), &[2, 3]);
        assert_eq!(ds.n_rows(), 2);
    }

    #[test]
    fn empty_dataset_has_no_rows() {
        let ds = Dataset::empty(names(3), vec![2, 2, 2]).unwrap();
        assert_eq!(ds.n_rows(), 0);
        assert_eq!(ds.rows().count(), 0);
    }
}
