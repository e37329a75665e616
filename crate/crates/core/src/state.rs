use crate::error::{check_len, CoreError, Result};

/// Ordered list of real component vectors `(y_1, ..., y_m)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BlockState {
    blocks: Vec<Vec<f64>>,
}

impl BlockState {
    pub fn new(blocks: Vec<Vec<f64>>) -> Self {
        Self { blocks }
    }

    pub fn zeros(layout: &[usize]) -> Self {
        Self {
            blocks: layout.iter().map(|&d| vec![0.0; d]).collect(),
        }
    }

    /// Splits a flat vector according to `layout`.
    pub fn from_flat(layout: &[usize], data: &[f64]) -> Result<Self> {
        check_len("BlockState::from_flat", layout.iter().sum(), data.len())?;
        let mut offset = 0;
        let blocks = layout
            .iter()
            .map(|&d| {
                let b = data[offset..offset + d].to_vec();
                offset += d;
                b
            })
            .collect();
        Ok(Self { blocks })
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn layout(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn block(&self, i: usize) -> &[f64] {
        &self.blocks[i]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut Vec<f64> {
        &mut self.blocks[i]
    }

    pub fn set_block(&mut self, i: usize, values: Vec<f64>) {
        self.blocks[i] = values;
    }

    pub fn blocks(&self) -> &[Vec<f64>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Vec<f64>> {
        self.blocks
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().flatten().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Max-norm distance; layouts must agree.
    pub fn max_abs_diff(&self, other: &BlockState) -> Result<f64> {
        self.check_same_layout(other)?;
        Ok(self
            .blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn dot(&self, other: &BlockState) -> Result<f64> {
        self.check_same_layout(other)?;
        Ok(self
            .blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn sub(&self, other: &BlockState) -> Result<BlockState> {
        self.check_same_layout(other)?;
        Ok(BlockState {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        })
    }

    pub(crate) fn check_same_layout(&self, other: &BlockState) -> Result<()> {
        check_len("block count", self.blocks.len(), other.blocks.len())?;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            check_len("block length", a.len(), b.len())?;
        }
        Ok(())
    }

    pub(crate) fn check_layout(&self, layout: &[usize]) -> Result<()> {
        check_len("block count", layout.len(), self.blocks.len())?;
        for (&d, b) in layout.iter().zip(&self.blocks) {
            check_len("block length", d, b.len())?;
        }
        if !self.is_finite() {
            return Err(CoreError::InvalidInput("state has non-finite entries".into()));
        }
        Ok(())
    }
}
