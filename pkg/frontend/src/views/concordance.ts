// KWIC concordance. The displayed total is the payload's total field and
// each line links (doc id + byte span) to the close-reading view.

import type { SearchPayload } from "../api";
import { attr, escapeHtml } from "../html";

export function renderConcordance(payload: SearchPayload): string {
  const parts: string[] = ['<section class="concordance">'];
  parts.push(
    `<div class="resultbar"><span class="total">${payload.total}</span> occurrence(s)` +
    `${payload.unknown_key ? ' <span class="unknown">clé inconnue</span>' : ""}` +
    ` — requête : <code class="query-echo">${escapeHtml(queryEcho(payload.query))}</code>` +
    ' <button data-action="back-dashboard">tableau de bord</button></div>',
  );
  if (payload.hits.length === 0) {
    parts.push('<p class="empty">Aucun résultat pour cette requête.</p></section>');
    return parts.join("");
  }
  parts.push('<table class="kwic">');
  for (const hit of payload.hits) {
    parts.push(
      `<tr class="clickable hit" data-action="open-document" data-doc=${attr(hit.doc_id)} ` +
      `data-start="${hit.start}" data-end="${hit.end}">` +
      `<td class="left">${escapeHtml(hit.left)}</td>` +
      `<td class="match"><mark>${escapeHtml(hit.match)}</mark></td>` +
      `<td class="right">${escapeHtml(hit.right)}</td>` +
      `<td class="locus">${escapeHtml(hit.doc_id)} · s${hit.sentence}</td></tr>`,
    );
  }
  parts.push("</table></section>");
  return parts.join("");
}

export function queryEcho(query: Record<string, unknown>): string {
  const shown = Object.entries(query)
    .filter(([, v]) => v !== null && v !== undefined && v !== "")
    .map(([k, v]) => `${k}=${String(v)}`);
  return shown.join(" ");
}
