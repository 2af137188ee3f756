import init, { flower, pathPiercing, thetaInFlower, familySize } from "./pkg/treehelly_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(id, text, isError) {
  const el = $(id);
  el.textContent = text;
  el.className = isError ? "err" : "";
}

// Copies above and below a middle row of roots; columns follow the pattern vertex.
function layout(view, canvas) {
  const q = Math.max(...view.copy);
  const half = Math.ceil(q / 2);
  const cols = Math.max(...view.origin);
  const dx = (canvas.width - 60) / Math.max(cols - 1, 1);
  const dy = (canvas.height - 40) / Math.max(q, 1);
  return view.origin.map((o, v) => {
    const c = view.copy[v];
    const row = c === 0 ? half : c <= half ? c - 1 : c;
    return [30 + (o - 1) * dx, 20 + row * dy];
  });
}

function drawGraph(canvas, view, highlight = new Set(), marked = new Set()) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const pos = layout(view, canvas);
  for (const [u, v] of view.edges) {
    const hot = highlight.has(`${Math.min(u, v)}-${Math.max(u, v)}`);
    ctx.strokeStyle = hot ? "#d33" : "#999";
    ctx.lineWidth = hot ? 3 : 1;
    ctx.beginPath();
    ctx.moveTo(...pos[u - 1]);
    ctx.lineTo(...pos[v - 1]);
    ctx.stroke();
  }
  pos.forEach(([x, y], i) => {
    ctx.fillStyle = view.copy[i] === 0 ? "#235" : marked.has(i + 1) ? "#d33" : "#6a8";
    ctx.beginPath();
    ctx.arc(x, y, 6, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#222";
    ctx.fillText(String(i + 1), x + 7, y - 7);
  });
}

function runFlower() {
  try {
    const view = JSON.parse(flower($("f-pattern").value, $("f-roots").value, num("f-q")));
    drawGraph($("f-canvas"), view);
    show("f-out", `${view.vertices} vertices, ${view.edges.length} edges, ` +
      `${view.components} components after removing the roots\ngraph6 ${view.graph6}`);
  } catch (e) {
    show("f-out", String(e), true);
  }
}

function runPiercing() {
  const canvas = $("p-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  try {
    const t = num("p-t");
    const r = JSON.parse(pathPiercing(t, $("p-int").value, num("p-k")));
    const dx = (canvas.width - 60) / Math.max(t - 1, 1);
    const x = (v) => 30 + (v - 1) * dx;
    const cut = new Set((r.min_edges || []).map(([u]) => u));
    for (let v = 1; v < t; v++) {
      ctx.strokeStyle = cut.has(v) ? "#d33" : "#999";
      ctx.lineWidth = cut.has(v) ? 4 : 1;
      ctx.beginPath();
      ctx.moveTo(x(v), 30);
      ctx.lineTo(x(v + 1), 30);
      ctx.stroke();
    }
    for (let v = 1; v <= t; v++) {
      ctx.fillStyle = "#235";
      ctx.beginPath();
      ctx.arc(x(v), 30, 5, 0, 2 * Math.PI);
      ctx.fill();
      ctx.fillText(String(v), x(v) - 3, 18);
    }
    const bars = $("p-int").value.split(";").map((s) => s.trim()).filter(Boolean);
    bars.forEach((s, i) => {
      const [a, b] = s.split("-").map(Number);
      const y = 55 + i * 14;
      ctx.strokeStyle = "#6a8";
      ctx.lineWidth = 6;
      ctx.beginPath();
      ctx.moveTo(x(a) - 4, y);
      ctx.lineTo(x(b ?? a) + 4, y);
      ctx.stroke();
    });
    const edges = r.min_edges ? r.min_edges.map(([u, v]) => `${u}-${v}`).join(", ") : "none (no edges)";
    show("p-out", `minimum edge piercing: ${edges}\n` +
      `every ${r.k + 1} intervals pierceable by ${r.k} edges: ${r.local_ok}` +
      (r.local_witness ? ` (fails on intervals ${r.local_witness.join(", ")})` : "") +
      `\nwhole system pierceable by ${r.k} edges: ${r.min_size !== null && r.min_size <= r.k}`);
  } catch (e) {
    show("p-out", String(e), true);
  }
}

function updateSize() {
  const n = familySize(num("t-t"), num("t-k"), num("t-q"));
  $("t-i").max = String(Math.max(n, 1));
  $("t-size").textContent = `of ${n}`;
}

function runTheta() {
  try {
    updateSize();
    const r = JSON.parse(thetaInFlower(num("t-t"), num("t-k"), num("t-q"), num("t-i")));
    const hot = new Set(r.theta_edges.map(([u, v]) => `${Math.min(u, v)}-${Math.max(u, v)}`));
    drawGraph($("t-canvas"), r.flower, hot, new Set(r.map));
    show("t-out", `roots ${r.roots.join(", ")}: theta(${r.a}, ${r.b}) with ${r.a} internally disjoint paths ` +
      `of length ${r.b}, embedding valid: ${r.valid}`);
  } catch (e) {
    show("t-out", String(e), true);
  }
}

await init();
$("f-go").onclick = runFlower;
$("p-go").onclick = runPiercing;
$("t-go").onclick = runTheta;
for (const id of ["t-t", "t-k", "t-q"]) $(id).onchange = updateSize;
runFlower();
runPiercing();
runTheta();
