//! JSON form of configurations. Every document carries a `"model"` field:
//! `"grid"`, `"lines"` or `"points"`. Colors and axes are 1-based on disk and
//! 0-based in memory. Grid coordinates are 1-based in both; projective
//! coordinates are `"num/den"` strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactgeom::{format_rat, parse_rat, Line, ProjPoint, RatScalar};
use crate::gridmodel::{ColoredGridConfig, GridClass, GridLine};
use crate::transforms::{ColoredLineConfig, DualPointConfig};

#[derive(Clone, Debug)]
pub enum Config {
    Grid(ColoredGridConfig),
    Lines(ColoredLineConfig),
    Points(DualPointConfig),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
enum Doc {
    Grid {
        k: usize,
        n: u32,
        classes: Vec<GridClassDoc>,
    },
    Lines {
        d: usize,
        classes: Vec<LineClassDoc>,
    },
    Points {
        classes: Vec<PointClassDoc>,
    },
}

#[derive(Serialize, Deserialize)]
struct GridClassDoc {
    color: usize,
    axis: usize,
    bases: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct LineClassDoc {
    color: usize,
    lines: Vec<LineDoc>,
}

#[derive(Serialize, Deserialize)]
struct LineDoc {
    p: Vec<String>,
    q: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PointClassDoc {
    color: usize,
    points: Vec<Vec<String>>,
}

fn point_doc(p: &ProjPoint) -> Vec<String> {
    p.coords()
        .iter()
        .map(|c| format_rat(&RatScalar::from_integer(c.clone())))
        .collect()
}

fn parse_point(v: &[String]) -> Result<ProjPoint> {
    let coords = v.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
    ProjPoint::from_rationals(&coords)
}

/// Colors must be listed as 1, 2, ..., m in order.
fn check_colors(colors: impl Iterator<Item = usize>) -> Result<()> {
    for (i, c) in colors.enumerate() {
        if c != i + 1 {
            return Err(Error::Parse(format!(
                "class {} has color {c}, expected {}",
                i + 1,
                i + 1
            )));
        }
    }
    Ok(())
}

impl Config {
    pub fn model(&self) -> &'static str {
        match self {
            Config::Grid(_) => "grid",
            Config::Lines(_) => "lines",
            Config::Points(_) => "points",
        }
    }

    /// Continuous view of the configuration. Point sets are undualized.
    pub fn to_lines(&self) -> Result<ColoredLineConfig> {
        match self {
            Config::Grid(g) => Ok(ColoredLineConfig::from_grid(g)),
            Config::Lines(l) => Ok(l.clone()),
            Config::Points(p) => crate::transforms::undualize(p),
        }
    }

    fn to_doc(&self) -> Doc {
        match self {
            Config::Grid(g) => Doc::Grid {
                k: g.k(),
                n: g.n(),
                classes: g
                    .classes()
                    .iter()
                    .enumerate()
                    .map(|(c, cl)| GridClassDoc {
                        color: c + 1,
                        axis: cl.axis + 1,
                        bases: cl.lines.iter().map(GridLine::reduced).collect(),
                    })
                    .collect(),
            },
            Config::Lines(l) => Doc::Lines {
                d: l.d(),
                classes: l
                    .classes()
                    .iter()
                    .enumerate()
                    .map(|(c, cl)| LineClassDoc {
                        color: c + 1,
                        lines: cl
                            .lines
                            .iter()
                            .map(|x| LineDoc {
                                p: point_doc(x.p()),
                                q: point_doc(x.q()),
                            })
                            .collect(),
                    })
                    .collect(),
            },
            Config::Points(p) => Doc::Points {
                classes: p
                    .classes()
                    .iter()
                    .enumerate()
                    .map(|(c, pts)| PointClassDoc {
                        color: c + 1,
                        points: pts.iter().map(point_doc).collect(),
                    })
                    .collect(),
            },
        }
    }

    fn from_doc(doc: Doc) -> Result<Self> {
        match doc {
            Doc::Grid { k, n, classes } => {
                check_colors(classes.iter().map(|c| c.color))?;
                let mut out = Vec::with_capacity(classes.len());
                for cl in classes {
                    if cl.axis == 0 {
                        return Err(Error::Parse("axes are 1-based".into()));
                    }
                    let axis = cl.axis - 1;
                    let mut lines = Vec::with_capacity(cl.bases.len());
                    for b in cl.bases {
                        if b.len() != k {
                            return Err(Error::DimensionMismatch {
                                expected: k,
                                got: b.len(),
                            });
                        }
                        lines.push(GridLine::from_reduced(axis, &b)?);
                    }
                    out.push(GridClass { axis, lines });
                }
                Ok(Config::Grid(ColoredGridConfig::new(k, n, out)?))
            }
            Doc::Lines { d, classes } => {
                check_colors(classes.iter().map(|c| c.color))?;
                let mut out = Vec::with_capacity(classes.len());
                for cl in classes {
                    let lines = cl
                        .lines
                        .iter()
                        .map(|l| Line::new(parse_point(&l.p)?, parse_point(&l.q)?))
                        .collect::<Result<Vec<_>>>()?;
                    out.push(lines);
                }
                Ok(Config::Lines(ColoredLineConfig::new(d, out)?))
            }
            Doc::Points { classes } => {
                check_colors(classes.iter().map(|c| c.color))?;
                let out = classes
                    .iter()
                    .map(|cl| cl.points.iter().map(|p| parse_point(p)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok(Config::Points(DualPointConfig::new(out)?))
            }
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(doc)
    }
}

impl From<ColoredGridConfig> for Config {
    fn from(c: ColoredGridConfig) -> Self {
        Config::Grid(c)
    }
}

impl From<ColoredLineConfig> for Config {
    fn from(c: ColoredLineConfig) -> Self {
        Config::Lines(c)
    }
}

impl From<DualPointConfig> for Config {
    fn from(c: DualPointConfig) -> Self {
        Config::Points(c)
    }
}
