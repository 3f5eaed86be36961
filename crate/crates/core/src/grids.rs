//! Direction grids on the circle and the sphere.

use crate::point::Point;

/// n evenly spaced unit directions on the circle.
pub fn circle(n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            Point::new2(a.cos(), a.sin())
        })
        .collect()
}

/// n roughly equidistributed unit directions on the sphere (Fibonacci lattice).
pub fn fibonacci_sphere(n: usize) -> Vec<Point> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let a = 2.0 * std::f64::consts::PI * i as f64 / golden;
            Point::new3(r * a.cos(), r * a.sin(), z)
        })
        .collect()
}

/// Unit directions for the given dimension: circle(n) or fibonacci_sphere(n).
pub fn directions(dim: usize, n: usize) -> Vec<Point> {
    match dim {
        2 => circle(n),
        _ => fibonacci_sphere(n),
    }
}

/// Structured triangulated grid on the sphere: the cube surface subdivided
/// g×g per face and radially projected. Returns vertices and triangles
/// (indices), with triangles consistently oriented outward.
///
/// Unlike a point cloud this comes with its own mesh, so downstream code can
/// build inscribed polytopes without running a convex hull.
pub struct SphereMesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
}

pub fn cube_sphere_mesh(g: usize) -> SphereMesh {
    assert!(g >= 1);
    let mut vertices: Vec<Point> = Vec::new();
    let mut index = std::collections::BTreeMap::new();
    let step = 2.0 / g as f64;
    // key vertices by integer grid coordinates so facet seams share vertices
    let mut vid = |ix: i64, iy: i64, iz: i64| -> usize {
        let key = (ix, iy, iz);
        if let Some(&i) = index.get(&key) {
            return i;
        }
        let p = Point::new3(ix as f64 * step / 2.0, iy as f64 * step / 2.0, iz as f64 * step / 2.0);
        let u = p.scale(1.0 / p.norm());
        let i = vertices.len();
        vertices.push(u);
        index.insert(key, i);
        i
    };
    let gi = g as i64;
    let mut triangles = Vec::new();
    // axis = fixed coordinate, sign = which face; (a,b) run over the face
    for axis in 0..3usize {
        for sign in [-1i64, 1] {
            for a in 0..gi {
                for b in 0..gi {
                    let mut corner = |da: i64, db: i64| -> usize {
                        let (u, v) = (-gi + 2 * (a + da), -gi + 2 * (b + db));
                        let (ix, iy, iz) = match axis {
                            0 => (sign * gi, u, v),
                            1 => (u, sign * gi, v),
                            _ => (u, v, sign * gi),
                        };
                        vid(ix, iy, iz)
                    };
                    let p00 = corner(0, 0);
                    let p10 = corner(1, 0);
                    let p01 = corner(0, 1);
                    let p11 = corner(1, 1);
                    triangles.push([p00, p10, p11]);
                    triangles.push([p00, p11, p01]);
                }
            }
        }
    }
    // orient all triangles outward (normal pointing away from the origin)
    for t in &mut triangles {
        let [i, j, k] = *t;
        let n = (vertices[j] - vertices[i]).cross(&(vertices[k] - vertices[i]));
        let c = (vertices[i] + vertices[j] + vertices[k]).scale(1.0 / 3.0);
        if n.dot(&c) < 0.0 {
            t.swap(1, 2);
        }
    }
    SphereMesh { vertices, triangles }
}
