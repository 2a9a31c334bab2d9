use super::cyclotomic::{Field, FieldElem};

/// Incrementally maintained row-echelon basis of a subspace of `K^n`.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<(usize, Vec<FieldElem>)>,
}

impl Echelon {
    pub fn new(field: &Field) -> Echelon {
        Echelon { field: field.clone(), rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, mut v: Vec<FieldElem>) -> Vec<FieldElem> {
        for (p, row) in &self.rows {
            if *p >= v.len() || v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (j, r) in row.iter().enumerate().skip(*p) {
                if j < v.len() && !r.is_zero() {
                    v[j] = &v[j] - &(&c * r);
                }
            }
        }
        v
    }

    /// Adds `v` if independent; returns whether it was.
    pub fn insert(&mut self, v: Vec<FieldElem>) -> bool {
        let v = self.reduce(v);
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = v[p].inv();
                let row: Vec<FieldElem> = v.iter().map(|x| x * &inv).collect();
                self.rows.push((p, row));
                true
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

/// Reduced row echelon form over the first `ncols` columns; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<FieldElem>], ncols: usize) -> (Vec<Vec<FieldElem>>, Vec<usize>) {
    let mut m: Vec<Vec<FieldElem>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..pivot_row.len() {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &(&f * &pivot_row[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of the right nullspace of `rows` (each of length `ncols`).
pub fn nullspace(field: &Field, rows: &[Vec<FieldElem>], ncols: usize) -> Vec<Vec<FieldElem>> {
    let (m, pivots) = rref(rows, ncols);
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -&m[i][free];
        }
        out.push(v);
    }
    out
}
