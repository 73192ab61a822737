//! Dancing links over a fixed option list.

pub(crate) enum Outcome {
    Found(Vec<usize>),
    None,
    Exhausted,
}

pub(crate) struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    items: usize,
}

impl Dlx {
    /// `options[r]` lists the items (in `0..items`) that option `r` covers.
    pub(crate) fn new(items: usize, options: &[Vec<usize>]) -> Self {
        let head = items;
        let total = items + 1 + options.iter().map(|o| o.len()).sum::<usize>();
        let mut d = Dlx {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            col: Vec::with_capacity(total),
            row: Vec::with_capacity(total),
            size: vec![0; items],
            items,
        };
        for i in 0..=items {
            d.left.push(if i == 0 { head } else { i - 1 });
            d.right.push(if i == head { 0 } else { i + 1 });
            d.up.push(i);
            d.down.push(i);
            d.col.push(i);
            d.row.push(usize::MAX);
        }
        if items == 0 {
            d.left[head] = head;
            d.right[head] = head;
        }
        for (r, opt) in options.iter().enumerate() {
            let first = d.col.len();
            for (k, &c) in opt.iter().enumerate() {
                let n = d.col.len();
                d.col.push(c);
                d.row.push(r);
                d.up.push(d.up[c]);
                d.down.push(c);
                let last = d.up[c];
                d.down[last] = n;
                d.up[c] = n;
                d.size[c] += 1;
                d.left.push(if k == 0 { n } else { n - 1 });
                d.right.push(first);
                if k > 0 {
                    d.right[n - 1] = n;
                    d.left[first] = n;
                }
            }
        }
        d
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// First exact cover found, choosing the item with fewest options
    /// (lowest index on ties) and options in input order.
    pub(crate) fn solve(&mut self, node_limit: u64) -> Outcome {
        let mut chosen = Vec::new();
        let mut nodes = 0u64;
        match self.search(&mut chosen, &mut nodes, node_limit) {
            Some(true) => Outcome::Found(chosen.iter().map(|&n| self.row[n]).collect()),
            Some(false) => Outcome::None,
            None => Outcome::Exhausted,
        }
    }

    fn search(&mut self, chosen: &mut Vec<usize>, nodes: &mut u64, limit: u64) -> Option<bool> {
        *nodes += 1;
        if *nodes > limit {
            return None;
        }
        let head = self.items;
        if self.right[head] == head {
            return Some(true);
        }
        let mut best = self.right[head];
        let mut c = best;
        while c != head {
            if self.size[c] < self.size[best] {
                best = c;
            }
            c = self.right[c];
        }
        if self.size[best] == 0 {
            return Some(false);
        }
        self.cover(best);
        let mut r = self.down[best];
        while r != best {
            chosen.push(r);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            let res = self.search(chosen, nodes, limit);
            if res != Some(false) {
                res?;
                return Some(true);
            }
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            chosen.pop();
            r = self.down[r];
        }
        self.uncover(best);
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knuth_example() {
        // items a..g = 0..6
        let opts = vec![
            vec![2, 4],
            vec![0, 3, 6],
            vec![1, 2, 5],
            vec![0, 3, 5],
            vec![1, 6],
            vec![3, 4, 6],
        ];
        let mut d = Dlx::new(7, &opts);
        match d.solve(1000) {
            Outcome::Found(mut rows) => {
                rows.sort();
                assert_eq!(rows, vec![0, 3, 4]);
            }
            _ => panic!("expected a cover"),
        }
    }

    #[test]
    fn no_cover_and_limit() {
        let mut d = Dlx::new(2, &[vec![0], vec![0, 1]]);
        assert!(matches!(d.solve(1000), Outcome::Found(_)));
        let mut d = Dlx::new(3, &[vec![0, 1], vec![1, 2]]);
        assert!(matches!(d.solve(1000), Outcome::None));
        let mut d = Dlx::new(3, &[vec![0, 1], vec![1, 2]]);
        assert!(matches!(d.solve(1), Outcome::Exhausted));
    }
}
