/// Summed area table with one guard row and column of zeros:
/// `K(x + 1, y + 1) = sum of k(u, v) for u <= x, v <= y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummedAreaTable {
    width: usize,
    height: usize,
    // (width + 1) x (height + 1), row-major
    table: Vec<f64>,
}

impl SummedAreaTable {
    /// Builds the table in a single pass from `k(x, y)`.
    pub fn from_fn(width: usize, height: usize, mut k: impl FnMut(usize, usize) -> f64) -> Self {
        let stride = width + 1;
        let mut table = vec![0.0; stride * (height + 1)];
        for y in 0..height {
            let mut row_sum = 0.0;
            for x in 0..width {
                row_sum += k(x, y);
                table[(y + 1) * stride + x + 1] = table[y * stride + x + 1] + row_sum;
            }
        }
        SummedAreaTable {
            width,
            height,
            table,
        }
    }

    pub fn from_values(width: usize, height: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), width * height);
        Self::from_fn(width, height, |x, y| values[y * width + x])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Table entry at guard coordinates, `0 <= x <= width`, `0 <= y <= height`.
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.table[y * (self.width + 1) + x]
    }

    /// Sum over the inclusive rectangle `[x0, x1] x [y0, y1]`.
    #[inline]
    pub fn rect_sum(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> f64 {
        debug_assert!(x0 <= x1 && x1 < self.width && y0 <= y1 && y1 < self.height);
        self.at(x1 + 1, y1 + 1) - self.at(x0, y1 + 1) - self.at(x1 + 1, y0) + self.at(x0, y0)
    }

    /// Rectangle sum with arbitrary integer bounds clamped to the table;
    /// empty intersections sum to zero.
    pub fn clamped_sum(&self, x0: i64, y0: i64, x1: i64, y1: i64) -> f64 {
        let x0 = x0.max(0);
        let y0 = y0.max(0);
        let x1 = x1.min(self.width as i64 - 1);
        let y1 = y1.min(self.height as i64 - 1);
        if x0 > x1 || y0 > y1 {
            return 0.0;
        }
        self.rect_sum(x0 as usize, y0 as usize, x1 as usize, y1 as usize)
    }

    pub fn total(&self) -> f64 {
        self.at(self.width, self.height)
    }
}
