#include "migsat/io/gpml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace migsat::io
{

namespace
{

namespace pt = boost::property_tree;

enum class Head
{
    Produce,
    Convert,
    Stimulate,
    Inhibit,
    Unmapped,
};

// Arrowheads per the MIM vocabulary used by PathVisio.
Head classify( const std::string& head )
{
    static const std::map<std::string, Head> table = {
        { "Arrow", Head::Stimulate },
        { "mim-catalysis", Head::Stimulate },
        { "mim-stimulation", Head::Stimulate },
        { "mim-necessary-stimulation", Head::Stimulate },
        { "mim-transcription-translation", Head::Produce },
        { "mim-translocation", Head::Produce },
        { "mim-conversion", Head::Convert },
        { "mim-inhibition", Head::Inhibit },
        { "TBar", Head::Inhibit },
    };
    auto it = table.find( head );
    return it == table.end() ? Head::Unmapped : it->second;
}

std::string attr( const pt::ptree& node, const char* name )
{
    if ( auto a = node.get_child_optional( "<xmlattr>" ) )
        return a->get<std::string>( name, "" );
    return "";
}

std::string sanitize( const std::string& raw )
{
    std::string out;
    bool gap = false;
    for ( char ch : raw )
    {
        const bool ok = std::isalnum( static_cast<unsigned char>( ch ) ) || ch == '_' || ch == '.';
        if ( ok )
        {
            if ( gap && !out.empty() )
                out += '_';
            out += ch;
            gap = false;
        }
        else
            gap = true;
    }
    return out;
}

struct RawInteraction
{
    std::string id;
    std::string source_ref;
    std::string target_ref;
    std::string head;
    std::vector<std::string> anchors;
};

std::string unique( std::string base, std::set<std::string>& taken )
{
    if ( base.empty() )
        base = "x";
    std::string name = base;
    for ( int n = 2; taken.contains( name ); ++n )
        name = base + "_" + std::to_string( n );
    taken.insert( name );
    return name;
}

} // namespace

MigDocument import_gpml( std::string_view xml )
{
    pt::ptree tree;
    try
    {
        std::istringstream in{ std::string( xml ) };
        pt::read_xml( in, tree, pt::xml_parser::trim_whitespace );
    }
    catch ( const pt::xml_parser_error& e )
    {
        throw ParseError( e.line(), 0, "malformed XML: " + e.message() );
    }

    const auto pathway = tree.get_child_optional( "Pathway" );
    if ( !pathway )
        throw ParseError( 0, 0, "no <Pathway> root element" );

    MigDocument doc;
    doc.source = Provenance::Gpml;
    std::set<std::string> taken;
    std::map<std::string, std::string> atom_by_ref; // GraphId -> atom name
    std::vector<std::string> atom_names;

    for ( const auto& [tag, node] : *pathway )
    {
        if ( tag != "DataNode" )
            continue;
        const std::string ref = attr( node, "GraphId" );
        std::string label = attr( node, "TextLabel" );
        if ( label.empty() )
            label = ref;
        const std::string name = unique( sanitize( label ), taken );
        if ( name != label )
            doc.warnings.push_back( "data node '" + label + "' imported as atom '" + name + "'" );
        if ( ref.empty() )
            doc.warnings.push_back( "data node '" + label + "' has no GraphId; nothing can connect to it" );
        else
            atom_by_ref[ref] = name;
        atom_names.push_back( name );
    }

    std::vector<RawInteraction> raw;
    std::map<std::string, std::size_t> interaction_by_anchor;
    for ( const auto& [tag, node] : *pathway )
    {
        if ( tag == "DataNode" || tag == "<xmlattr>" )
            continue;
        if ( tag != "Interaction" )
        {
            if ( tag != "Graphics" && tag != "InfoBox" && tag != "Legend" && tag != "Biopax" && tag != "BiopaxRef" &&
                 tag != "Comment" && tag != "Attribute" && tag != "<xmlcomment>" )
                doc.warnings.push_back( "ignored <" + tag + "> element" );
            continue;
        }
        RawInteraction r;
        r.id = attr( node, "GraphId" );
        if ( const auto graphics = node.get_child_optional( "Graphics" ) )
        {
            std::vector<const pt::ptree*> points;
            for ( const auto& [gtag, g] : *graphics )
            {
                if ( gtag == "Point" )
                    points.push_back( &g );
                else if ( gtag == "Anchor" )
                    r.anchors.push_back( attr( g, "GraphId" ) );
            }
            if ( points.size() >= 2 )
            {
                r.source_ref = attr( *points.front(), "GraphRef" );
                r.target_ref = attr( *points.back(), "GraphRef" );
                r.head = attr( *points.back(), "ArrowHead" );
            }
        }
        for ( const auto& a : r.anchors )
            if ( !a.empty() )
                interaction_by_anchor[a] = raw.size();
        raw.push_back( std::move( r ) );
    }

    // Ids first, so regulations can name their targets.
    std::vector<std::string> ids( raw.size() );
    for ( std::size_t i = 0; i < raw.size(); ++i )
    {
        const std::string base = raw[i].id.empty() ? "i" + std::to_string( i + 1 ) : sanitize( raw[i].id );
        ids[i] = unique( base, taken );
    }

    std::vector<std::optional<Link>> mapped( raw.size() );
    for ( std::size_t i = 0; i < raw.size(); ++i )
    {
        const RawInteraction& r = raw[i];
        const std::string what = "interaction '" + ids[i] + "'";
        auto src = atom_by_ref.find( r.source_ref );
        if ( src == atom_by_ref.end() )
        {
            doc.warnings.push_back( what + " does not start at a data node; skipped" );
            continue;
        }
        const Head head = classify( r.head );
        if ( head == Head::Unmapped )
        {
            doc.warnings.push_back( what + " has unmapped arrowhead '" + ( r.head.empty() ? "none" : r.head ) +
                                    "'; skipped" );
            continue;
        }
        Link l;
        l.id = ids[i];
        l.sources = { src->second };
        if ( auto tgt = atom_by_ref.find( r.target_ref ); tgt != atom_by_ref.end() )
        {
            if ( head == Head::Inhibit )
            {
                doc.warnings.push_back( what + " inhibits a data node, which has no link meaning; skipped" );
                continue;
            }
            l.kind = head == Head::Convert ? LinkKind::ProduceConsume : LinkKind::ProduceKeep;
            l.target_atoms = { tgt->second };
        }
        else if ( auto anc = interaction_by_anchor.find( r.target_ref ); anc != interaction_by_anchor.end() )
        {
            if ( head == Head::Convert || head == Head::Produce )
            {
                doc.warnings.push_back( what + " converts into an interaction; skipped" );
                continue;
            }
            l.kind = head == Head::Inhibit ? LinkKind::Inhibit : LinkKind::Activate;
            l.target_link = ids[anc->second];
        }
        else
        {
            doc.warnings.push_back( what + " ends on neither a data node nor an anchor; skipped" );
            continue;
        }
        mapped[i] = std::move( l );
    }

    // Regulations whose target was skipped would dangle; drop them transitively.
    for ( bool changed = true; changed; )
    {
        changed = false;
        std::set<std::string> present;
        for ( const auto& m : mapped )
            if ( m )
                present.insert( m->id );
        for ( auto& m : mapped )
            if ( m && is_regulation( m->kind ) && !present.contains( m->target_link ) )
            {
                doc.warnings.push_back( "interaction '" + m->id + "' regulates skipped interaction '" +
                                        m->target_link + "'; skipped" );
                m.reset();
                changed = true;
            }
    }

    std::vector<Link> links;
    std::set<std::string> produced;
    for ( auto& m : mapped )
        if ( m )
        {
            if ( is_production( m->kind ) )
                produced.insert( m->target_atoms.begin(), m->target_atoms.end() );
            links.push_back( std::move( *m ) );
        }

    std::vector<Atom> atoms;
    for ( const auto& name : atom_names )
        atoms.push_back( { name, produced.contains( name ) ? AtomKind::Endogenous : AtomKind::Exogenous } );
    if ( atoms.empty() )
        throw ParseError( 0, 0, "pathway has no data nodes" );

    doc.mig = Mig( std::move( atoms ), InitialConditions{}, std::move( links ) );
    if ( auto errors = validate_mig( doc.mig ); !errors.empty() )
        throw ParseError( 0, 0, errors.front().message );
    return doc;
}

} // namespace migsat::io
