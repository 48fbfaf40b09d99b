import init, { builtinNames, builtinScene, surfaceMesh, laplaceImage, gammaCurvature } from "./pkg/ruled_web.js";

const $ = (id) => document.getElementById(id);
const canvas = $("view");
const ctx = canvas.getContext("2d");
let view = { yaw: 0.6, pitch: 0.4 };
let drawing = null;

function project(p, scale, cx, cy) {
  const [x, y, z] = p;
  const cyaw = Math.cos(view.yaw), syaw = Math.sin(view.yaw);
  const cp = Math.cos(view.pitch), sp = Math.sin(view.pitch);
  const x1 = cyaw * x - syaw * y;
  const y1 = syaw * x + cyaw * y;
  const y2 = cp * y1 - sp * z;
  const z2 = sp * y1 + cp * z;
  return [cx + scale * x1, cy - scale * z2, y2];
}

function bounds(points) {
  let c = [0, 0, 0];
  points.forEach((p) => { c[0] += p[0]; c[1] += p[1]; c[2] += p[2]; });
  c = c.map((x) => x / Math.max(points.length, 1));
  let r = 1e-9;
  points.forEach((p) => { r = Math.max(r, Math.hypot(p[0] - c[0], p[1] - c[1], p[2] - c[2])); });
  return { c, r };
}

function render() {
  const w = (canvas.width = canvas.clientWidth);
  const h = (canvas.height = canvas.clientHeight);
  ctx.clearRect(0, 0, w, h);
  if (!drawing) return;
  const all = [...(drawing.vertices || []), ...(drawing.polyline || [])];
  const { c, r } = bounds(all);
  const scale = 0.42 * Math.min(w, h) / r;
  const P = (p) => project([p[0] - c[0], p[1] - c[1], p[2] - c[2]], scale, w / 2, h / 2);
  if (drawing.vertices && drawing.triangles) {
    const pv = drawing.vertices.map(P);
    const tris = drawing.triangles.map((t) => ({ t, depth: pv[t[0]][2] + pv[t[1]][2] + pv[t[2]][2] }));
    tris.sort((a, b) => b.depth - a.depth);
    ctx.lineWidth = 0.5;
    for (const { t } of tris) {
      ctx.beginPath();
      ctx.moveTo(pv[t[0]][0], pv[t[0]][1]);
      ctx.lineTo(pv[t[1]][0], pv[t[1]][1]);
      ctx.lineTo(pv[t[2]][0], pv[t[2]][1]);
      ctx.closePath();
      ctx.fillStyle = "rgba(90,140,200,0.35)";
      ctx.strokeStyle = "rgba(30,60,110,0.5)";
      ctx.fill();
      ctx.stroke();
    }
  }
  if (drawing.polyline && drawing.polyline.length) {
    ctx.lineWidth = 2;
    ctx.strokeStyle = "#c33";
    ctx.beginPath();
    drawing.polyline.map(P).forEach((p, i) => (i ? ctx.lineTo(p[0], p[1]) : ctx.moveTo(p[0], p[1])));
    ctx.stroke();
    if (drawing.polyline.length === 1 || drawing.point) {
      const p = P(drawing.polyline[0]);
      ctx.fillStyle = "#c33";
      ctx.beginPath();
      ctx.arc(p[0], p[1], 5, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}

function show(text, error = false) {
  $("info").textContent = text;
  $("info").className = error ? "err" : "";
}

function run(op) {
  try {
    op(JSON.parse($("config").value));
  } catch (e) {
    show(String(e), true);
  }
}

const fmt = (x) => (x === null ? "-" : Number(x).toExponential(3));

$("surface").onclick = () => run((cfg) => {
  const m = JSON.parse(surfaceMesh(JSON.stringify(cfg)));
  drawing = { vertices: m.vertices, triangles: m.triangles, polyline: m.striction };
  show(`${m.vertices.length} vertices, ${m.triangles.length} triangles\nred: line of striction`);
  render();
});

$("image").onclick = () => run((cfg) => {
  const r = JSON.parse(laplaceImage(JSON.stringify(cfg)));
  const lines = [`verdict: ${r.verdict}`];
  r.evidence.forEach((e) => lines.push(`  ${e.test}: ${fmt(e.value)} (threshold ${fmt(e.threshold)})`));
  lines.push(`centroid: ${r.centroid.map((x) => x.toFixed(6)).join(", ")}`);
  if (r.verdict === "surface") {
    drawing = { vertices: r.vertices, triangles: r.triangles };
  } else {
    drawing = { polyline: r.gamma, point: r.verdict === "point" };
  }
  show(lines.join("\n"));
  render();
});

$("curvature").onclick = () => run((cfg) => {
  const r = JSON.parse(gammaCurvature(JSON.stringify(cfg)));
  const kmax = Math.max(...r.k), kmin = Math.min(...r.k);
  const rows = r.u.map((u, i) => `  u = ${u.toFixed(4)}  k = ${fmt(r.k[i])}`);
  drawing = { polyline: r.points };
  show(`image curve curvature in [${fmt(kmin)}, ${fmt(kmax)}]\n` + rows.join("\n"));
  render();
});

let drag = null;
canvas.onpointerdown = (e) => { drag = [e.clientX, e.clientY]; };
window.onpointerup = () => { drag = null; };
window.onpointermove = (e) => {
  if (!drag) return;
  view.yaw += (e.clientX - drag[0]) * 0.01;
  view.pitch += (e.clientY - drag[1]) * 0.01;
  drag = [e.clientX, e.clientY];
  render();
};
window.onresize = render;

await init();
const select = $("scene");
for (const name of JSON.parse(builtinNames())) {
  select.add(new Option(name, name));
}
select.onchange = () => { $("config").value = builtinScene(select.value); $("surface").click(); };
select.onchange();
