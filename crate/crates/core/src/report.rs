//! Artifact plumbing: order and partition files, run-record tables,
//! performance profiles and spy plots.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{BiPartition, DiGraph, Side, TopologicalOrder};

/// One vertex id per line, in order.
pub fn write_order<W: Write>(ord: &TopologicalOrder, mut w: W) -> Result<()> {
    for v in ord.sequence() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

pub fn read_order<R: BufRead>(r: R) -> Result<TopologicalOrder> {
    let mut seq = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        seq.push(t.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("expected a vertex id, got {t:?}"),
        })?);
    }
    TopologicalOrder::from_sequence(seq)
}

/// One `S` or `T` per line, line `i` labelling vertex `i`.
pub fn write_partition<W: Write>(p: &BiPartition, mut w: W) -> Result<()> {
    for &s in p.labels() {
        writeln!(w, "{}", s.as_str())?;
    }
    Ok(())
}

pub fn read_partition<R: BufRead>(r: R) -> Result<BiPartition> {
    let mut labels = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        labels.push(match line.trim() {
            "S" => Side::S,
            "T" => Side::T,
            "" => continue,
            other => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected S or T, got {other:?}"),
                })
            }
        });
    }
    Ok(BiPartition::from_labels(labels))
}

/// One measurement row: metric values of one algorithm on one graph.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub graph: String,
    pub algo: String,
    pub seed: u64,
    /// Left empty when timings are not recorded, so tables stay reproducible.
    pub wall_ms: Option<f64>,
    pub metrics: BTreeMap<String, f64>,
}

const FIXED_COLUMNS: [&str; 4] = ["graph", "algo", "seed", "wall_ms"];

/// Writes `graph,algo,seed,wall_ms,<metrics...>` with metric columns sorted
/// by name; a record missing a metric gets an empty cell.
pub fn write_records<W: Write>(records: &[RunRecord], w: W) -> Result<()> {
    let names: BTreeSet<&str> = records
        .iter()
        .flat_map(|r| r.metrics.keys().map(String::as_str))
        .collect();
    let mut out = csv::Writer::from_writer(w);
    out.write_record(FIXED_COLUMNS.iter().copied().chain(names.iter().copied()))?;
    for r in records {
        let mut row = vec![
            r.graph.clone(),
            r.algo.clone(),
            r.seed.to_string(),
            r.wall_ms.map(|t| t.to_string()).unwrap_or_default(),
        ];
        row.extend(
            names
                .iter()
                .map(|&m| r.metrics.get(m).map(|v| v.to_string()).unwrap_or_default()),
        );
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: std::io::Read>(r: R) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.clone();
    if header.len() < FIXED_COLUMNS.len()
        || header.iter().zip(FIXED_COLUMNS).any(|(a, b)| a != b)
    {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header must start with {}", FIXED_COLUMNS.join(",")),
        });
    }
    let names: Vec<String> = header.iter().skip(FIXED_COLUMNS.len()).map(String::from).collect();
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("not a number: {s:?}"),
            })
        };
        let mut metrics = BTreeMap::new();
        for (name, cell) in names.iter().zip(row.iter().skip(FIXED_COLUMNS.len())) {
            if !cell.is_empty() {
                metrics.insert(name.clone(), num(cell)?);
            }
        }
        out.push(RunRecord {
            graph: row[0].to_string(),
            algo: row[1].to_string(),
            seed: row[2].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad seed {:?}", &row[2]),
            })?,
            wall_ms: if row[3].is_empty() { None } else { Some(num(&row[3])?) },
            metrics,
        });
    }
    Ok(out)
}

/// Fraction of graphs on which each algorithm is within a factor `tau` of
/// the best algorithm, for a grid of `tau >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerformanceProfile {
    pub algos: Vec<String>,
    pub taus: Vec<f64>,
    /// `fractions[a][t]` for algorithm `a` at `taus[t]`.
    pub fractions: Vec<Vec<f64>>,
    /// Graphs included in the profile.
    pub graphs: Vec<String>,
    /// Graphs dropped because their best value was not positive.
    pub excluded: Vec<String>,
}

impl PerformanceProfile {
    /// `tau,<algo...>` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(std::iter::once("tau").chain(self.algos.iter().map(String::as_str)))?;
        for (t, tau) in self.taus.iter().enumerate() {
            let mut row = vec![tau.to_string()];
            row.extend(self.fractions.iter().map(|f| f[t].to_string()));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Builds the profile of `metric` (smaller is better). Several seeds of one
/// (graph, algorithm) pair are averaged; a pair without a record counts as
/// never within any factor. `grid_points` log-spaced thresholds run from 1
/// to the largest finite ratio.
pub fn performance_profile(
    records: &[RunRecord],
    metric: &str,
    grid_points: usize,
) -> Result<PerformanceProfile> {
    let mut sums: BTreeMap<(&str, &str), (f64, usize)> = BTreeMap::new();
    for r in records {
        if let Some(&v) = r.metrics.get(metric) {
            let e = sums.entry((r.graph.as_str(), r.algo.as_str())).or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    if sums.is_empty() {
        return Err(Error::InvalidConfig(format!("no records carry metric {metric:?}")));
    }
    let algos: Vec<&str> = sums.keys().map(|k| k.1).collect::<BTreeSet<_>>().into_iter().collect();
    let all_graphs: BTreeSet<&str> = sums.keys().map(|k| k.0).collect();
    let value = |g: &str, a: &str| sums.get(&(g, a)).map(|(s, c)| s / *c as f64);

    let mut graphs = Vec::new();
    let mut excluded = Vec::new();
    let mut ratios: Vec<Vec<f64>> = vec![Vec::new(); algos.len()];
    for &g in &all_graphs {
        let best = algos
            .iter()
            .filter_map(|a| value(g, a))
            .fold(f64::INFINITY, f64::min);
        if !(best > 0.0) {
            log::warn!("graph {g}: best {metric} is {best}, excluded from the profile");
            excluded.push(g.to_string());
            continue;
        }
        graphs.push(g.to_string());
        for (i, a) in algos.iter().enumerate() {
            ratios[i].push(value(g, a).map_or(f64::INFINITY, |v| v / best));
        }
    }
    if graphs.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no graph has a positive best {metric}"
        )));
    }

    let max_ratio = ratios
        .iter()
        .flatten()
        .copied()
        .filter(|r| r.is_finite())
        .fold(1.0, f64::max);
    let taus = log_grid(max_ratio, grid_points.max(2));
    let fractions = ratios
        .iter()
        .map(|rs| {
            taus.iter()
                .map(|&tau| {
                    // Grid points come from exp/ln; forgive the last ulp.
                    let limit = tau * (1.0 + 1e-12);
                    rs.iter().filter(|&&r| r <= limit).count() as f64 / rs.len() as f64
                })
                .collect()
        })
        .collect();
    Ok(PerformanceProfile {
        algos: algos.into_iter().map(String::from).collect(),
        taus,
        fractions,
        graphs,
        excluded,
    })
}

/// `points` values from 1 to `max` (both exact), evenly spaced in log scale.
fn log_grid(max: f64, points: usize) -> Vec<f64> {
    if max <= 1.0 {
        return vec![1.0];
    }
    let step = max.ln() / (points - 1) as f64;
    let mut taus: Vec<f64> = (0..points).map(|i| (step * i as f64).exp()).collect();
    taus[0] = 1.0;
    taus[points - 1] = max;
    taus
}

/// Grayscale raster of the permuted adjacency matrix: the edge `(u, v)`
/// darkens pixel `(row, col) = (sigma(u), sigma(v)) / f`, where `f` is the
/// smallest factor fitting the matrix into `max_size` pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpyPlot {
    pub size: usize,
    pub factor: usize,
    /// Row-major gray levels, 255 = white.
    pub pixels: Vec<u8>,
}

impl SpyPlot {
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.size + col]
    }

    /// Binary portable pixmap (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.size, self.size).into_bytes();
        out.reserve(3 * self.pixels.len());
        for &p in &self.pixels {
            out.extend_from_slice(&[p, p, p]);
        }
        out
    }
}

/// A pixel covering `f x f` entries turns fully black at `f` edges.
pub fn spy_plot(g: &DiGraph, ord: &TopologicalOrder, max_size: usize) -> Result<SpyPlot> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if max_size == 0 {
        return Err(Error::InvalidConfig("image size must be positive".into()));
    }
    if ord.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: ord.len(),
        });
    }
    if !g.validate_toporder(ord) {
        return Err(Error::InvalidOrder);
    }
    let factor = n.div_ceil(max_size);
    let size = n.div_ceil(factor);
    let mut counts = vec![0usize; size * size];
    for &(u, v) in g.edges() {
        counts[ord.position(u) / factor * size + ord.position(v) / factor] += 1;
    }
    let pixels = counts
        .iter()
        .map(|&c| {
            let dark = (c as f64 / factor as f64).min(1.0);
            (255.0 * (1.0 - dark)).round() as u8
        })
        .collect();
    Ok(SpyPlot {
        size,
        factor,
        pixels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(graph: &str, algo: &str, v: f64) -> RunRecord {
        RunRecord {
            graph: graph.into(),
            algo: algo.into(),
            seed: 0,
            wall_ms: None,
            metrics: BTreeMap::from([("mla".to_string(), v)]),
        }
    }

    #[test]
    fn order_and_partition_roundtrip() {
        let ord = TopologicalOrder::from_sequence(vec![2, 0, 1]).unwrap();
        let mut buf = Vec::new();
        write_order(&ord, &mut buf).unwrap();
        assert_eq!(buf, b"2\n0\n1\n");
        assert_eq!(read_order(&buf[..]).unwrap(), ord);
        assert!(read_order(&b"0\n0\n"[..]).is_err());

        let p = BiPartition::from_s_set(3, &[1]).unwrap();
        let mut buf = Vec::new();
        write_partition(&p, &mut buf).unwrap();
        assert_eq!(buf, b"T\nS\nT\n");
        assert_eq!(read_partition(&buf[..]).unwrap(), p);
    }

    #[test]
    fn records_roundtrip() {
        let mut a = rec("g,1", "dfs", 3.0);
        a.wall_ms = Some(1.5);
        let mut b = rec("g2", "bfs", 4.0);
        b.metrics.insert("cutwidth".into(), 2.0);
        let mut buf = Vec::new();
        write_records(&[a.clone(), b.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("graph,algo,seed,wall_ms,cutwidth,mla\n"));
        assert_eq!(read_records(&buf[..]).unwrap(), vec![a, b]);
    }

    #[test]
    fn single_algorithm_profile_is_one() {
        let p = performance_profile(&[rec("a", "x", 2.0), rec("b", "x", 5.0)], "mla", 10).unwrap();
        assert_eq!(p.taus, vec![1.0]);
        assert_eq!(p.fractions, vec![vec![1.0]]);
    }

    #[test]
    fn dominating_algorithm_starts_at_one() {
        let recs = [rec("a", "x", 1.0), rec("a", "y", 2.0), rec("b", "x", 3.0), rec("b", "y", 4.0)];
        let p = performance_profile(&recs, "mla", 5).unwrap();
        assert_eq!(p.fractions[0][0], 1.0);
        assert_eq!(p.fractions[1][0], 0.0);
        assert_eq!(*p.taus.last().unwrap(), 2.0);
        assert_eq!(*p.fractions[1].last().unwrap(), 1.0);
    }

    #[test]
    fn zero_best_excluded() {
        let recs = [rec("a", "x", 0.0), rec("a", "y", 2.0), rec("b", "x", 3.0), rec("b", "y", 6.0)];
        let p = performance_profile(&recs, "mla", 3).unwrap();
        assert_eq!(p.excluded, vec!["a".to_string()]);
        assert_eq!(p.graphs, vec!["b".to_string()]);
        assert!(performance_profile(&recs[..1], "mla", 3).is_err());
    }

    #[test]
    fn spy_plot_diamond() {
        let g = DiGraph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let plot = spy_plot(&g, &TopologicalOrder::identity(4), 16).unwrap();
        assert_eq!((plot.size, plot.factor), (4, 1));
        let black: Vec<(usize, usize)> = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|&(r, c)| plot.get(r, c) == 0)
            .collect();
        assert_eq!(black, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(plot.pixels.iter().filter(|&&p| p != 0 && p != 255).count(), 0);
        let ppm = plot.to_ppm();
        assert!(ppm.starts_with(b"P6\n4 4\n255\n"));
        assert_eq!(ppm.len(), 11 + 48);
    }

    #[test]
    fn spy_plot_downsamples() {
        let edges: Vec<_> = (0..9).map(|i| (i, i + 1)).collect();
        let g = DiGraph::from_edges(10, &edges).unwrap();
        let plot = spy_plot(&g, &TopologicalOrder::identity(10), 4).unwrap();
        assert_eq!((plot.size, plot.factor), (4, 3));
        // Block (0, 0) holds edges 0->1 and 1->2; block (0, 1) holds 2->3.
        assert_eq!(plot.get(0, 0), 85);
        assert_eq!(plot.get(0, 1), 170);
        let bad = TopologicalOrder::from_sequence((0..10).rev().collect()).unwrap();
        assert!(spy_plot(&g, &bad, 4).is_err());
    }
}
