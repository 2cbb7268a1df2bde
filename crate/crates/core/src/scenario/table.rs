//! In-memory CSV tables.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn text(s: &str) -> Self {
        Cell::Text(s.to_string())
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem; the table is written to `<name>.csv`.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).map_err(std::io::Error::from)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render)).map_err(std::io::Error::from)?;
        }
        w.flush()?;
        w.into_inner().map_err(|e| Error::Io(e.into_error()))
    }
}

/// Tables keyed by name; pushing a name twice appends the rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tables(pub Vec<Table>);

impl Tables {
    pub fn push(&mut self, t: Table) {
        match self.0.iter_mut().find(|x| x.name == t.name) {
            Some(x) => {
                assert_eq!(x.header, t.header, "table {} pushed with two headers", t.name);
                x.rows.extend(t.rows);
            }
            None => self.0.push(t),
        }
    }

    pub fn insert_front(&mut self, t: Table) {
        self.0.insert(0, t);
    }

    pub fn get(&self, name: &str) -> Option<&Table> {
        self.0.iter().find(|t| t.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Table> {
        self.0.iter()
    }
}
