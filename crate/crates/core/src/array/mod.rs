//! Placement delivery arrays: storage, checking and sender maps.

mod man;
mod verify;

pub use man::man_pda;
pub use verify::{
    find_phi, phi_candidates, scheme_metrics_from_dpda, verify_dpda, verify_pda, Condition, PdaParams, PdaReport,
    Regularity, Violation, Witness,
};

use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Star,
    /// 1-based integer id.
    Label(u32),
}

impl Cell {
    pub fn is_star(self) -> bool {
        matches!(self, Cell::Star)
    }

    pub fn label(self) -> Option<u32> {
        match self {
            Cell::Label(s) => Some(s),
            Cell::Star => None,
        }
    }
}

/// The construction-level meaning of an integer: a point set or a vector, plus its occurrence
/// number within its row group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeLabel {
    Subset { points: Vec<u32>, occurrence: u32 },
    Vector { entries: Vec<u32>, occurrence: u32 },
}

impl fmt::Display for SchemeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close, items, occ) = match self {
            SchemeLabel::Subset { points, occurrence } => ('{', '}', points, occurrence),
            SchemeLabel::Vector { entries, occurrence } => ('(', ')', entries, occurrence),
        };
        let body: Vec<String> = items.iter().map(u32::to_string).collect();
        write!(f, "{open}{}{close}_{occ}", body.join(","))
    }
}

/// Interns scheme labels to dense ids in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelRegistry {
    labels: Vec<SchemeLabel>,
    ids: HashMap<SchemeLabel, u32>,
}

impl LabelRegistry {
    pub fn intern(&mut self, label: SchemeLabel) -> u32 {
        if let Some(&id) = self.ids.get(&label) {
            return id;
        }
        self.labels.push(label.clone());
        let id = self.labels.len() as u32;
        self.ids.insert(label, id);
        id
    }

    pub fn get(&self, id: u32) -> Option<&SchemeLabel> {
        self.labels.get(id.checked_sub(1)? as usize)
    }

    pub fn id_of(&self, label: &SchemeLabel) -> Option<u32> {
        self.ids.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// `F × K` grid of stars and integer labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedArray {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
    registry: LabelRegistry,
}

impl CodedArray {
    pub fn new(rows: usize, cols: usize, cells: Vec<Cell>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("array dimensions must be positive"));
        }
        if cells.len() != rows * cols {
            return Err(Error::invalid(format!("expected {} cells, got {}", rows * cols, cells.len())));
        }
        if cells.iter().any(|c| *c == Cell::Label(0)) {
            return Err(Error::invalid("label ids start at 1"));
        }
        Ok(CodedArray { rows, cols, cells, registry: LabelRegistry::default() })
    }

    /// Builds from scheme labels, interning them in row-major first-appearance order.
    pub fn from_labels(rows: usize, cols: usize, labels: Vec<Option<SchemeLabel>>) -> Result<Self> {
        let mut registry = LabelRegistry::default();
        let cells = labels
            .into_iter()
            .map(|l| l.map_or(Cell::Star, |l| Cell::Label(registry.intern(l))))
            .collect();
        let mut arr = Self::new(rows, cols, cells)?;
        arr.registry = registry;
        Ok(arr)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> Cell {
        self.cells[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, cell: Cell) {
        self.cells[row * self.cols + col] = cell;
    }

    pub fn row(&self, row: usize) -> &[Cell] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn registry(&self) -> &LabelRegistry {
        &self.registry
    }

    /// Largest label id present (the `S` of a valid array).
    pub fn max_label(&self) -> u32 {
        self.cells.iter().filter_map(|c| c.label()).max().unwrap_or(0)
    }

    /// Cells of each label, row-major; entry `s - 1` lists label `s`.
    pub fn label_cells(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.max_label() as usize];
        for (i, c) in self.cells.iter().enumerate() {
            if let Cell::Label(s) = c {
                out[*s as usize - 1].push((i / self.cols, i % self.cols));
            }
        }
        out
    }

    pub fn star_count(&self, col: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, col).is_star()).count()
    }
}

/// Sender of each label: `phi[s - 1]` is a 0-based column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenderMap {
    phi: Vec<usize>,
}

impl SenderMap {
    pub fn new(phi: Vec<usize>) -> Self {
        SenderMap { phi }
    }

    pub fn sender(&self, label: u32) -> Option<usize> {
        self.phi.get(label.checked_sub(1)? as usize).copied()
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.phi
    }

    /// Number of labels sent by each of `k` users.
    pub fn send_counts(&self, k: usize) -> Vec<usize> {
        let mut out = vec![0; k];
        for &c in &self.phi {
            out[c] += 1;
        }
        out
    }
}
