import init, { paper_block_demo, classical_tower, magic_check } from "./pkg/magiclim_web.js";

const $ = (id) => document.getElementById(id);

function cell(row, text, cls) {
  const td = row.insertCell();
  td.textContent = text;
  if (cls) td.className = cls;
  return td;
}

function render(json) {
  const report = JSON.parse(json);
  const table = $("report");
  table.replaceChildren();
  const head = table.createTHead().insertRow();
  for (const h of ["status", "check", "statement", "details"]) head.appendChild(document.createElement("th")).textContent = h;
  const body = table.createTBody();
  for (const c of report.checks) {
    const row = body.insertRow();
    cell(row, c.status, c.status);
    cell(row, c.id);
    const stmt = cell(row, c.description);
    stmt.appendChild(document.createElement("br"));
    stmt.appendChild(document.createElement("span")).textContent = c.anchor;
    stmt.lastChild.className = "anchor";
    const extra = [];
    if (c.expected) extra.push(`expected ${c.expected}`);
    if (c.witness) extra.push(`witness: ${c.witness}`);
    if (c.details) extra.push(JSON.stringify(c.details, null, 1));
    cell(row, extra.join("\n"), "detail");
  }
  const s = report.summary;
  $("summary").textContent = `${s.pass} pass, ${s.fail} fail, ${s.unexpected ?? 0} unexpected`;
}

function run(f) {
  $("error").textContent = "";
  try {
    render(f());
  } catch (e) {
    $("error").textContent = String(e.message ?? e);
  }
}

await init();
$("run-block").onclick = () => run(() => paper_block_demo(+$("m").value, +$("k").value, $("gadgets").checked));
$("run-tower").onclick = () => run(() => classical_tower(+$("depth").value));
$("run-scenario").onclick = () => run(() => magic_check($("scenario").value));
