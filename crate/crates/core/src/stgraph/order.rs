//! Order maintenance: a linked list of items with integer tags supporting
//! insert-after and constant-time comparison.
//!
//! When there is no room between two tags, the shortest run of `j`
//! successors whose tag span exceeds `j * j` is spread out evenly.

const NONE: usize = usize::MAX;
const INITIAL_GAP: u64 = 1 << 32;

#[derive(Clone, Debug, Default)]
pub struct OrderList {
    tag: Vec<u64>,
    next: Vec<usize>,
    prev: Vec<usize>,
    head: usize,
    relabels: usize,
}

impl OrderList {
    /// Items `0..n` in increasing order.
    pub fn new(n: usize) -> Self {
        let mut o = OrderList { head: if n == 0 { NONE } else { 0 }, ..Default::default() };
        for i in 0..n {
            o.tag.push((i as u64 + 1) * INITIAL_GAP);
            o.next.push(if i + 1 < n { i + 1 } else { NONE });
            o.prev.push(if i == 0 { NONE } else { i - 1 });
        }
        o
    }

    pub fn len(&self) -> usize {
        self.tag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tag.is_empty()
    }

    /// `a` comes strictly before `b`.
    #[inline]
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.tag[a] < self.tag[b]
    }

    /// Number of relabelling passes performed so far.
    pub fn relabels(&self) -> usize {
        self.relabels
    }

    /// Appends a new item (id `len()`) directly after `x`.
    pub fn insert_after(&mut self, x: usize) -> usize {
        let y = self.tag.len();
        let nx = self.next[x];
        self.tag.push(0);
        self.next.push(nx);
        self.prev.push(x);
        self.next[x] = y;
        if nx != NONE {
            self.prev[nx] = y;
        }
        let hi = if nx == NONE { u64::MAX } else { self.tag[nx] };
        if hi - self.tag[x] >= 2 {
            self.tag[y] = self.tag[x] + (hi - self.tag[x]) / 2;
        } else {
            self.relabel_from(x);
        }
        y
    }

    fn relabel_from(&mut self, x: usize) {
        self.relabels += 1;
        let base = self.tag[x];
        // items after x that get new tags, ending before `cur`
        let mut run = Vec::new();
        let mut cur = self.next[x];
        loop {
            run.push(cur);
            cur = self.next[cur];
            let j = run.len() as u128;
            let hi = if cur == NONE { u64::MAX } else { self.tag[cur] };
            if (hi - base) as u128 > j * j || cur == NONE {
                let span = (hi - base) as u128;
                if span <= j {
                    self.relabel_all();
                    return;
                }
                let step = span / (j + 1);
                for (i, &v) in run.iter().enumerate() {
                    self.tag[v] = base + (step * (i as u128 + 1)) as u64;
                }
                return;
            }
        }
    }

    fn relabel_all(&mut self) {
        let n = self.tag.len() as u64;
        let gap = (u64::MAX / (n + 1)).max(1);
        let mut v = self.head;
        let mut t = gap;
        while v != NONE {
            self.tag[v] = t;
            t = t.saturating_add(gap);
            v = self.next[v];
        }
    }

    /// Items in list order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut v = self.head;
        std::iter::from_fn(move || {
            if v == NONE {
                None
            } else {
                let r = v;
                v = self.next[v];
                Some(r)
            }
        })
    }

    /// Tags strictly increase along the list and every item is on it.
    pub fn audit(&self) -> Result<(), String> {
        let mut count = 0;
        let mut last: Option<u64> = None;
        for v in self.iter() {
            if let Some(l) = last {
                if self.tag[v] <= l {
                    return Err(format!("order tags not increasing at item {v}"));
                }
            }
            last = Some(self.tag[v]);
            count += 1;
            if count > self.tag.len() {
                return Err("order list has a cycle".into());
            }
        }
        if count != self.tag.len() {
            return Err(format!("order list holds {count} of {} items", self.tag.len()));
        }
        Ok(())
    }
}
