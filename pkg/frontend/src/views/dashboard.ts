// Distant-reading entry point: distribution tables rendered straight from
// the stats payload. Every row is clickable and navigates to the
// concordance for the corresponding annotation query.

import type { StatsPayload } from "../api";
import { attr, escapeHtml } from "../html";

const COUNTER_LABELS: [string, string][] = [
  ["documents", "documents"],
  ["sentences", "phrases"],
  ["tokens", "tokens"],
  ["entities", "entités"],
  ["concepts", "concepts"],
];

export function renderDashboard(stats: StatsPayload): string {
  const parts: string[] = ['<section class="dashboard">'];
  parts.push('<div class="counters">');
  for (const [key, label] of COUNTER_LABELS) {
    const value = stats.counters[key] ?? 0;
    parts.push(
      `<div class="counter"><span class="value">${value}</span>` +
      `<span class="label">${escapeHtml(label)}</span></div>`,
    );
  }
  parts.push("</div>");

  const noEntities = Object.keys(stats.entity_distribution).length === 0;
  const noConcepts = Object.keys(stats.concept_distribution).length === 0;
  if (noEntities && noConcepts) {
    parts.push('<p class="empty">Aucune annotation dans ce corpus.</p></section>');
    return parts.join("");
  }

  parts.push('<div class="panels">');
  parts.push('<div class="panel"><h2>Entités</h2><table class="dist" data-table="entities">');
  for (const [etype, count] of sortedRows(stats.entity_distribution)) {
    parts.push(
      `<tr class="clickable" data-action="entity-type" data-etype=${attr(etype)}>` +
      `<td>${escapeHtml(etype)}</td><td class="count">${count}</td></tr>`,
    );
  }
  parts.push("</table></div>");

  parts.push('<div class="panel"><h2>Concepts</h2><table class="dist" data-table="concepts">');
  for (const [category, count] of sortedRows(stats.concept_distribution)) {
    parts.push(
      `<tr class="clickable" data-action="category" data-category=${attr(category)}>` +
      `<td>${escapeHtml(category)}</td><td class="count">${count}</td></tr>`,
    );
  }
  parts.push("</table></div>");

  parts.push('<div class="panel"><h2>Concepts représentatifs</h2>');
  for (const [category, members] of Object.entries(stats.representative_concepts)) {
    if (!members.length) continue;
    parts.push(`<h3>${escapeHtml(category)}</h3><ul class="members">`);
    for (const [member, count] of members) {
      parts.push(
        `<li class="clickable" data-action="member" data-member=${attr(member)}>` +
        `${escapeHtml(member)} <span class="count">${count}</span></li>`,
      );
    }
    parts.push("</ul>");
  }
  parts.push("</div>");

  parts.push('<div class="panel"><h2>Répartition par genre</h2><table class="dist gender">');
  for (const [etype, counts] of Object.entries(stats.gender_distribution.entities)) {
    parts.push(genderRow(etype, counts));
  }
  parts.push(genderRow("concepts agent", stats.gender_distribution.agent_totals));
  parts.push("</table></div>");

  parts.push("</div></section>");
  return parts.join("");
}

function sortedRows(distribution: Record<string, number>): [string, number][] {
  return Object.entries(distribution).sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]));
}

function genderRow(label: string, counts: Record<string, number>): string {
  const f = counts["feminine"] ?? 0;
  const m = counts["masculine"] ?? 0;
  const u = counts["unknown"] ?? 0;
  return (
    `<tr><td>${escapeHtml(label)}</td>` +
    `<td class="count" title="féminin">${f} f</td>` +
    `<td class="count" title="masculin">${m} m</td>` +
    `<td class="count" title="indéterminé">${u} ?</td></tr>`
  );
}
