use super::{Label, PointCloud};
use crate::error::{Error, Result};
use std::fmt::Write as _;

/// Parses the point-cloud CSV format.
///
/// One point per line, comma-separated decimal coordinates. Lines starting
/// with `#` are comments; a `#` header whose last column is `label` means
/// every row carries a trailing `signal`/`noise` tag. The dimension is taken
/// from the first data row.
pub fn read_cloud_csv(text: &str) -> Result<PointCloud> {
    let mut labelled = false;
    let mut dim = None;
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            if dim.is_none() {
                labelled = header
                    .split(',')
                    .last()
                    .map(|c| c.trim() == "label")
                    .unwrap_or(false);
            }
            continue;
        }
        let mut fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if labelled {
            let tag = fields.pop().unwrap_or_default();
            labels.push(match tag {
                "signal" => Label::Signal,
                "noise" => Label::Noise,
                other => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("unknown label `{other}`"),
                    })
                }
            });
        }
        let d = *dim.get_or_insert(fields.len());
        if fields.len() != d {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("expected {d} coordinates, found {}", fields.len()),
            });
        }
        for f in fields {
            let v: f64 = f.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad coordinate `{f}`"),
            })?;
            coords.push(v);
        }
    }
    let dim = dim.ok_or(Error::Empty("point cloud file"))?;
    let cloud = PointCloud::from_flat(coords, dim)?;
    if labelled {
        cloud.with_labels(labels)
    } else {
        Ok(cloud)
    }
}

/// Writes the point-cloud CSV format. Floats use the shortest
/// representation that round-trips exactly.
pub fn write_cloud_csv(cloud: &PointCloud, with_labels: bool) -> String {
    let mut out = String::new();
    let dim = cloud.dim();
    let labels = cloud.labels().filter(|_| with_labels);
    let mut header: Vec<String> = (0..dim).map(|t| format!("x{t}")).collect();
    if labels.is_some() {
        header.push("label".into());
    }
    let _ = writeln!(out, "# {}", header.join(","));
    for (i, p) in cloud.points().enumerate() {
        let row: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&row.join(","));
        if let Some(l) = labels {
            out.push(',');
            out.push_str(l[i].as_str());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_and_labels() {
        let c = read_cloud_csv("# x,y\n0,0\n0.5, 1\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.point(1), &[0.5, 1.0]);
        let c = read_cloud_csv("# x0,x1,label\n1,2,signal\n3,4,noise\n").unwrap();
        assert_eq!(c.labels().unwrap(), &[Label::Signal, Label::Noise]);
        assert!(read_cloud_csv("1,2\n3\n").is_err());
        assert!(read_cloud_csv("# only header\n").is_err());
        assert!(read_cloud_csv("1,abc\n").is_err());
    }

    #[test]
    fn round_trip_is_exact() {
        let c = PointCloud::new(&[vec![0.1, 1.0 / 3.0], vec![-2e-300, 7.25]])
            .unwrap()
            .with_labels(vec![Label::Signal, Label::Noise])
            .unwrap();
        let text = write_cloud_csv(&c, true);
        assert_eq!(read_cloud_csv(&text).unwrap(), c);
    }
}
